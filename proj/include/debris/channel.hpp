// SPDX-License-Identifier: Apache-2.0
//
// debris-tensor: tensor-based space debris detection for LEO satellite links
// Copyright (C) 2026 The debris-tensor authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/*!
 * \file channel.hpp
 * \brief Geometric THz inter-satellite channel: path sets, LOS/NLOS gains,
 *        ULA steering vectors, per-subcarrier channel matrices and noise floor.
 *
 * Angles: AoA/AoD are measured from array broadside, i.e. sin(angle) is the
 * projection of the unit propagation direction onto the array axis. AoD uses
 * the direction from the TX towards the next hop, AoA the direction from the
 * RX back towards the previous hop. Angles are stored wrapped into [0, 2 pi).
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace debris
{

inline constexpr double speed_of_light = 299792458.0; // m/s
inline constexpr double boltzmann = 1.380649e-23;     // J/K

using Vec3 = Eigen::Vector3d;

enum class ReflectionMode
{
    physical,       ///< Fresnel coefficient times Rayleigh roughness factor
    uniform_random  ///< |R| ~ U(0,1), arg R ~ U[0, 2 pi)
};

struct GeometryConfig
{
    Vec3 tx_position{0.0, 0.0, 0.0};
    Vec3 rx_position{0.8, 0.0, 0.0};
    std::vector<Vec3> debris_positions;
    Vec3 tx_array_axis{0.0, 1.0, 0.0};
    Vec3 rx_array_axis{0.0, 1.0, 0.0};
    double carrier_frequency = 100e9;   // Hz
    double sampling_rate = 2e9;         // Hz
    int total_subcarriers = 128;
    double absorption_coefficient = 0.0; // 1/m
    double refractive_index = 2.0;
    double surface_roughness = 0.0;      // m, std dev of surface height
    ReflectionMode reflection_mode = ReflectionMode::uniform_random;

    void validate() const
    {
        if (!(carrier_frequency > 0.0))
            throw InvalidInput("geometry: carrier frequency must be > 0");
        if (!(sampling_rate > 0.0))
            throw InvalidInput("geometry: sampling rate must be > 0");
        if (total_subcarriers < 1)
            throw InvalidInput("geometry: total_subcarriers must be >= 1");
        if (absorption_coefficient < 0.0)
            throw InvalidInput("geometry: absorption coefficient must be >= 0");
        if (surface_roughness < 0.0)
            throw InvalidInput("geometry: surface roughness must be >= 0");
        if (!((rx_position - tx_position).norm() > 0.0))
            throw InvalidInput("geometry: TX and RX are collocated");
        if (!(tx_array_axis.norm() > 0.0) || !(rx_array_axis.norm() > 0.0))
            throw InvalidInput("geometry: array axis must be non-zero");
        for (std::size_t d = 0; d < debris_positions.size(); ++d)
        {
            if ((debris_positions[d] - tx_position).norm() <= 0.0 ||
                (debris_positions[d] - rx_position).norm() <= 0.0)
                throw InvalidInput("geometry: debris " + std::to_string(d) + " is collocated with a satellite");
        }
    }
};

struct NoiseModel
{
    double brightness_temperature = 6000.0; // K
    double ambient_temperature = 1000.0;    // K
    double bandwidth = 2e9;                 // Hz

    void validate() const
    {
        if (brightness_temperature < 0.0 || ambient_temperature < 0.0)
            throw InvalidInput("noise: temperatures must be >= 0");
        if (!(bandwidth > 0.0))
            throw InvalidInput("noise: bandwidth must be > 0");
    }
};

struct Path
{
    Complex alpha;
    double theta = 0.0; // AoA, radians in [0, 2 pi)
    double phi = 0.0;   // AoD, radians in [0, 2 pi)
    double tau = 0.0;   // s
    bool is_los = false;
};

struct PathSet
{
    std::vector<Path> paths;
    std::size_t L() const noexcept { return paths.size(); }
};

// ------------------------------------------------------------------------

/// ULA response with half-wavelength spacing, unit norm.
inline CVector steering_vector(double angle, int n)
{
    if (n < 1)
        throw InvalidInput("steering_vector: antenna count must be >= 1");
    CVector a(n);
    const double s = std::sin(angle);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i)
        a[i] = std::polar(norm, std::numbers::pi * i * s);
    return a;
}

/// Broadside angle of a propagation direction relative to an array axis, wrapped to [0, 2 pi).
inline double array_angle(const Vec3 &direction, const Vec3 &axis)
{
    const double s = std::clamp(direction.normalized().dot(axis.normalized()), -1.0, 1.0);
    double a = std::asin(s);
    if (a < 0.0)
        a += 2.0 * std::numbers::pi;
    return a;
}

/// Free-space THz gain over distance r: c/(4 pi f r) e^{-k r / 2} e^{-j 2 pi f r / c}.
inline Complex spreading_gain(double frequency, double distance, double absorption)
{
    if (!(distance > 0.0))
        throw InvalidInput("path distance must be > 0");
    if (!(frequency > 0.0))
        throw InvalidInput("frequency must be > 0");
    const double mag = speed_of_light / (4.0 * std::numbers::pi * frequency * distance) *
                       std::exp(-absorption * distance / 2.0);
    const double tau = distance / speed_of_light;
    return std::polar(mag, -2.0 * std::numbers::pi * std::fmod(frequency * tau, 1.0));
}

inline Complex los_gain(const GeometryConfig &geom)
{
    return spreading_gain(geom.carrier_frequency, (geom.rx_position - geom.tx_position).norm(),
                          geom.absorption_coefficient);
}

/// Smooth-surface Fresnel reflection coefficient, gamma = -exp(-2 cos(psi) / sqrt(eta^2 - 1)).
inline double fresnel_coefficient(double incidence, double refractive_index)
{
    if (!(refractive_index > 1.0))
        throw InvalidInput("fresnel_coefficient: refractive index must be > 1");
    return -std::exp(-2.0 * std::cos(incidence) / std::sqrt(refractive_index * refractive_index - 1.0));
}

/// Rayleigh roughness factor exp(-8 pi^2 f^2 sigma^2 cos^2(psi) / c^2).
inline double roughness_factor(double incidence, double frequency, double roughness)
{
    const double c = std::cos(incidence);
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return std::exp(-8.0 * pi2 * frequency * frequency * roughness * roughness * c * c /
                    (speed_of_light * speed_of_light));
}

inline void check_debris_index(const GeometryConfig &geom, std::size_t d)
{
    if (d >= geom.debris_positions.size())
        throw InvalidInput("debris index " + std::to_string(d) + " out of range");
}

/// Specular incidence angle at the debris: half the angle between the TX and RX as seen from it.
inline double incidence_angle(const GeometryConfig &geom, std::size_t d)
{
    check_debris_index(geom, d);
    const Vec3 to_tx = (geom.tx_position - geom.debris_positions[d]).normalized();
    const Vec3 to_rx = (geom.rx_position - geom.debris_positions[d]).normalized();
    return 0.5 * std::acos(std::clamp(to_tx.dot(to_rx), -1.0, 1.0));
}

inline Complex physical_reflection(const GeometryConfig &geom, std::size_t d)
{
    const double psi = incidence_angle(geom, d);
    return fresnel_coefficient(psi, geom.refractive_index) *
           roughness_factor(psi, geom.carrier_frequency, geom.surface_roughness);
}

/// NLOS gain through debris d with a given reflection coefficient.
inline Complex nlos_gain(const GeometryConfig &geom, std::size_t d, Complex reflection)
{
    check_debris_index(geom, d);
    const double r1 = (geom.debris_positions[d] - geom.tx_position).norm();
    const double r2 = (geom.rx_position - geom.debris_positions[d]).norm();
    if (!(r1 > 0.0) || !(r2 > 0.0))
        throw InvalidInput("nlos_gain: debris collocated with a satellite");
    return spreading_gain(geom.carrier_frequency, r1 + r2, geom.absorption_coefficient) * reflection;
}

/// NLOS gain with the physical (Fresnel x roughness) reflection coefficient.
inline Complex nlos_gain(const GeometryConfig &geom, std::size_t d)
{
    return nlos_gain(geom, d, physical_reflection(geom, d));
}

inline Complex random_reflection(Rng &rng)
{
    const double mag = uniform01(rng);
    return mag * unit_phasor(rng);
}

/// One LOS path plus one single-bounce path per debris position.
inline PathSet build_path_set(const GeometryConfig &geom, Rng &rng)
{
    geom.validate();
    PathSet ps;
    const Vec3 los_dir = geom.rx_position - geom.tx_position;
    Path los;
    los.alpha = los_gain(geom);
    los.phi = array_angle(los_dir, geom.tx_array_axis);
    los.theta = array_angle(-los_dir, geom.rx_array_axis);
    los.tau = los_dir.norm() / speed_of_light;
    los.is_los = true;
    ps.paths.push_back(los);

    for (std::size_t d = 0; d < geom.debris_positions.size(); ++d)
    {
        const Vec3 &p = geom.debris_positions[d];
        const Complex refl = geom.reflection_mode == ReflectionMode::physical ? physical_reflection(geom, d)
                                                                               : random_reflection(rng);
        Path nl;
        nl.alpha = nlos_gain(geom, d, refl);
        nl.phi = array_angle(p - geom.tx_position, geom.tx_array_axis);
        nl.theta = array_angle(p - geom.rx_position, geom.rx_array_axis);
        nl.tau = ((p - geom.tx_position).norm() + (geom.rx_position - p).norm()) / speed_of_light;
        ps.paths.push_back(nl);
    }
    return ps;
}

/// Uniform draws inside the axis-aligned box [lo, hi].
inline std::vector<Vec3> sample_debris_positions(const Vec3 &lo, const Vec3 &hi, int count, Rng &rng)
{
    if (count < 0)
        throw InvalidInput("debris count must be >= 0");
    if ((hi.array() < lo.array()).any())
        throw InvalidInput("debris box: max corner below min corner");
    std::vector<Vec3> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int n = 0; n < count; ++n)
    {
        Vec3 p;
        for (int c = 0; c < 3; ++c)
            p[c] = uniform(rng, lo[c], hi[c]);
        out.push_back(p);
    }
    return out;
}

/// e^{-j 2 pi tau f_s k / Kbar}
inline Complex subcarrier_phase(double tau, double sampling_rate, int k, int total_subcarriers)
{
    const double cycles = std::fmod(tau * sampling_rate * k / total_subcarriers, 1.0);
    return std::polar(1.0, -2.0 * std::numbers::pi * cycles);
}

/// H_k = sum_l alpha_l e^{-j 2 pi tau_l f_s k / Kbar} a_rx(theta_l) a_tx(phi_l)^T for physical subcarrier k.
inline CMatrix channel_matrix(const PathSet &ps, int k, const GeometryConfig &geom, int n_rx, int n_tx)
{
    if (k < 1 || k > geom.total_subcarriers)
        throw InvalidInput("channel_matrix: subcarrier index out of range");
    CMatrix h = CMatrix::Zero(n_rx, n_tx);
    for (const Path &p : ps.paths)
        h += p.alpha * subcarrier_phase(p.tau, geom.sampling_rate, k, geom.total_subcarriers) *
             steering_vector(p.theta, n_rx) * steering_vector(p.phi, n_tx).transpose();
    return h;
}

inline double noise_temperature(const NoiseModel &nm) { return nm.brightness_temperature + nm.ambient_temperature; }

/// Complex AWGN variance on one subcarrier: k_B T_N B / Kbar.
inline double subcarrier_noise_power(const NoiseModel &nm, int total_subcarriers)
{
    nm.validate();
    if (total_subcarriers < 1)
        throw InvalidInput("total_subcarriers must be >= 1");
    return boltzmann * noise_temperature(nm) * nm.bandwidth / total_subcarriers;
}

} // namespace debris
