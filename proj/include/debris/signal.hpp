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
 * \file signal.hpp
 * \brief Received-signal tensor Y (M x T x K) for the training phase.
 *
 * Each frame t uses one frequency-flat beamforming vector p(t) (column t of
 * P) on every training subcarrier, and each sub-frame m uses combining vector
 * q_m (column m of Q). Slice k of the tensor is Q^T H_k P + W_k, which for a
 * geometric channel is the CP model
 *
 *   Y = sum_l (Q^T a_rx(theta_l)) o (P^T a_tx(phi_l)) o (alpha_l g(tau_l)) + W.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "channel.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace debris
{

struct ProbeConfig
{
    int n_tx = 64;
    int n_rx = 32;
    int rf_chains_tx = 4; // descriptive only
    int rf_chains_rx = 1; // descriptive only
    int frames = 20;      // T
    int subframes = 32;   // M
    int training_subcarriers = 6;  // K
    int total_subcarriers = 128;   // Kbar
    double transmit_power = 1.0;   // W
    std::uint64_t seed = 0;

    void validate() const
    {
        if (n_tx < 1 || n_rx < 1)
            throw InvalidInput("probe: antenna counts must be >= 1");
        if (rf_chains_tx < 1 || rf_chains_rx < 1)
            throw InvalidInput("probe: RF chain counts must be >= 1");
        if (frames < 1 || subframes < 1 || training_subcarriers < 1)
            throw InvalidInput("probe: T, M and K must be >= 1");
        if (training_subcarriers > total_subcarriers)
            throw InvalidInput("probe: K must not exceed Kbar");
        if (!(transmit_power > 0.0) || !std::isfinite(transmit_power))
            throw InvalidInput("probe: transmit power must be > 0");
    }

    Dims3 tensor_dims() const
    {
        return {static_cast<std::size_t>(subframes), static_cast<std::size_t>(frames),
                static_cast<std::size_t>(training_subcarriers)};
    }
};

struct ProbeMatrices
{
    CMatrix P; // n_tx x T, beamforming (power scaled)
    CMatrix Q; // n_rx x M, combining (unit modulus)
};

/// Physical (1-based) indices of K training subcarriers spread evenly over Kbar: 1 + i * floor(Kbar / K).
inline std::vector<int> training_subcarrier_indices(int k, int total)
{
    if (k < 1 || k > total)
        throw InvalidInput("training subcarriers: need 1 <= K <= Kbar");
    const int step = total / k;
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        idx[static_cast<std::size_t>(i)] = 1 + i * step;
    return idx;
}

/// Amplitude of one beamforming entry: sqrt(P_T / Kbar) / sqrt(N_tx).
inline double probe_amplitude(const ProbeConfig &cfg)
{
    return std::sqrt(cfg.transmit_power / cfg.total_subcarriers) / std::sqrt(static_cast<double>(cfg.n_tx));
}

/// Unit-circle random P and Q; P is then scaled so each column carries P_T / Kbar.
/// The draw order is P then Q, so the phases do not depend on transmit_power.
inline ProbeMatrices generate_probes(const ProbeConfig &cfg, Rng &rng)
{
    cfg.validate();
    ProbeMatrices pm;
    pm.P.resize(cfg.n_tx, cfg.frames);
    pm.Q.resize(cfg.n_rx, cfg.subframes);
    for (Eigen::Index t = 0; t < pm.P.cols(); ++t)
        for (Eigen::Index n = 0; n < pm.P.rows(); ++n)
            pm.P(n, t) = unit_phasor(rng);
    for (Eigen::Index m = 0; m < pm.Q.cols(); ++m)
        for (Eigen::Index n = 0; n < pm.Q.rows(); ++n)
            pm.Q(n, m) = unit_phasor(rng);
    pm.P *= probe_amplitude(cfg);
    return pm;
}

/// g(tau) over the given physical subcarrier indices.
inline CVector delay_signature(double tau, double sampling_rate, const std::vector<int> &subcarriers,
                               int total_subcarriers)
{
    CVector g(static_cast<Eigen::Index>(subcarriers.size()));
    for (std::size_t i = 0; i < subcarriers.size(); ++i)
        g[static_cast<Eigen::Index>(i)] = subcarrier_phase(tau, sampling_rate, subcarriers[i], total_subcarriers);
    return g;
}

/// g(tau) with entries k = 1..K.
inline CVector delay_signature(double tau, double sampling_rate, int k, int total_subcarriers)
{
    if (k < 1 || k > total_subcarriers)
        throw InvalidInput("delay_signature: need 1 <= K <= Kbar");
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        idx[static_cast<std::size_t>(i)] = i + 1;
    return delay_signature(tau, sampling_rate, idx, total_subcarriers);
}

namespace detail
{
inline void check_probe_shapes(const ProbeMatrices &pm, const ProbeConfig &cfg)
{
    cfg.validate();
    if (pm.P.rows() != cfg.n_tx || pm.P.cols() != cfg.frames)
        throw InvalidInput("probe matrix P does not match N_tx x T");
    if (pm.Q.rows() != cfg.n_rx || pm.Q.cols() != cfg.subframes)
        throw InvalidInput("probe matrix Q does not match N_rx x M");
}
} // namespace detail

/// Noiseless CP factors of the received tensor, one column per path.
inline FactorSet received_factors(const PathSet &ps, const ProbeMatrices &pm, const ProbeConfig &cfg,
                                  double sampling_rate)
{
    detail::check_probe_shapes(pm, cfg);
    const auto L = static_cast<Eigen::Index>(ps.L());
    const auto subcarriers = training_subcarrier_indices(cfg.training_subcarriers, cfg.total_subcarriers);
    FactorSet fs;
    fs.A.resize(cfg.subframes, L);
    fs.B.resize(cfg.frames, L);
    fs.C.resize(cfg.training_subcarriers, L);
    for (Eigen::Index l = 0; l < L; ++l)
    {
        const Path &p = ps.paths[static_cast<std::size_t>(l)];
        fs.A.col(l) = pm.Q.transpose() * steering_vector(p.theta, cfg.n_rx);
        fs.B.col(l) = pm.P.transpose() * steering_vector(p.phi, cfg.n_tx);
        fs.C.col(l) = p.alpha * delay_signature(p.tau, sampling_rate, subcarriers, cfg.total_subcarriers);
    }
    return fs;
}

/// Adds i.i.d. CN(0, noise_var) to every entry, i fastest.
inline void add_noise(ComplexTensor3 &y, double noise_var, Rng &rng)
{
    if (noise_var < 0.0)
        throw InvalidInput("noise variance must be >= 0");
    if (noise_var == 0.0)
        return;
    for (Complex &z : y.data())
        z += complex_normal(rng, noise_var);
}

/// CP-form construction (sum of rank-1 path terms) plus noise.
inline ComplexTensor3 build_received_tensor(const PathSet &ps, const ProbeMatrices &pm, const ProbeConfig &cfg,
                                            double sampling_rate, double noise_var, Rng &rng)
{
    ComplexTensor3 y = ps.L() == 0 ? ComplexTensor3(cfg.tensor_dims())
                                   : cp_reconstruct(received_factors(ps, pm, cfg, sampling_rate));
    add_noise(y, noise_var, rng);
    return y;
}

/// Slice-wise construction Y_k = Q^T H_k P + W_k from explicit channel matrices.
inline ComplexTensor3 build_received_tensor_slicewise(const PathSet &ps, const ProbeMatrices &pm,
                                                      const ProbeConfig &cfg, const GeometryConfig &geom,
                                                      double noise_var, Rng &rng)
{
    detail::check_probe_shapes(pm, cfg);
    if (geom.total_subcarriers != cfg.total_subcarriers)
        throw InvalidInput("geometry and probe config disagree on Kbar");
    const auto subcarriers = training_subcarrier_indices(cfg.training_subcarriers, cfg.total_subcarriers);
    ComplexTensor3 y(cfg.tensor_dims());
    for (std::size_t k = 0; k < subcarriers.size(); ++k)
        y.slice(k) = pm.Q.transpose() * channel_matrix(ps, subcarriers[k], geom, cfg.n_rx, cfg.n_tx) * pm.P;
    add_noise(y, noise_var, rng);
    return y;
}

} // namespace debris
