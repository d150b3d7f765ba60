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
 * \file config.hpp
 * \brief Scenario/sweep configuration and its line-based "key = value" file format.
 *
 * Blank lines and text after '#' are ignored. Keys are case-sensitive and may
 * appear at most once. Units are SI unless the value carries a dB suffix:
 * power values accept "W", "dBW" and "dBm" ("20 dBm" = 0.1 W, "30 dBW" = 1000 W).
 * Vectors are written "x, y, z"; lists of vectors are separated by ';'.
 * The full key list with defaults is produced by config_schema().
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "channel.hpp"
#include "cpd.hpp"
#include "ct3_io.hpp"
#include "errors.hpp"
#include "signal.hpp"

namespace debris
{

struct SweepSpec
{
    std::vector<double> power_grid{0.1, 1.0, 10.0, 100.0, 1000.0}; // W
    std::vector<double> mu_grid{0.06, 0.08, 0.1};
    std::vector<int> k_grid{6};
    int trials_per_point = 200;
    int debris_count_h1 = 1;
    std::uint64_t master_seed = 1;

    void validate() const
    {
        if (power_grid.empty() || mu_grid.empty() || k_grid.empty())
            throw InvalidInput("sweep: grids must be non-empty");
        for (double p : power_grid)
            if (!(p > 0.0) || !std::isfinite(p))
                throw InvalidInput("sweep: power grid values must be > 0");
        for (double m : mu_grid)
            if (!(m > 0.0) || !std::isfinite(m))
                throw InvalidInput("sweep: mu grid values must be > 0");
        for (int k : k_grid)
            if (k < 1)
                throw InvalidInput("sweep: K grid values must be >= 1");
        if (trials_per_point < 1)
            throw InvalidInput("sweep: trials_per_point must be >= 1");
        if (debris_count_h1 < 1)
            throw InvalidInput("sweep: debris_count_h1 must be >= 1");
    }
};

struct ScenarioConfig
{
    GeometryConfig geometry;
    Vec3 debris_box_min{0.2, 0.08, -0.08};
    Vec3 debris_box_max{0.6, 0.4, 0.08};
    NoiseModel noise;
    bool noise_enabled = true;
    /// Detector input is Y / (sigma (sqrt M + sqrt T + sqrt K) margin).
    double noise_margin = 5.0;
    ProbeConfig probe;
    AlsConfig als;
    double threshold_rel = 1e-3;
    SweepSpec sweep;
    double target_pfa = 0.05;
    int h0_calibration_trials = 0; ///< 0: same as trials_per_point (min 100)
    int h0_audit_trials = 0;       ///< 0: same as trials_per_point

    int calibration_trials() const { return std::max(100, h0_calibration_trials > 0 ? h0_calibration_trials : sweep.trials_per_point); }
    int audit_trials() const { return h0_audit_trials > 0 ? h0_audit_trials : sweep.trials_per_point; }

    void validate() const
    {
        geometry.validate();
        noise.validate();
        probe.validate();
        als.validate();
        sweep.validate();
        if (geometry.total_subcarriers != probe.total_subcarriers)
            throw InvalidInput("config: total_subcarriers mismatch");
        for (int k : sweep.k_grid)
            if (k > probe.total_subcarriers)
                throw InvalidInput("config: K grid value exceeds total_subcarriers");
        if ((debris_box_max.array() < debris_box_min.array()).any())
            throw InvalidInput("config: debris_box_max below debris_box_min");
        if (!(threshold_rel > 0.0 && threshold_rel < 1.0))
            throw InvalidInput("config: threshold_rel must lie in (0, 1)");
        if (!(target_pfa > 0.0 && target_pfa < 1.0))
            throw InvalidInput("config: target_pfa must lie in (0, 1)");
        if (!(noise_margin > 0.0))
            throw InvalidInput("config: noise_margin must be > 0");
        if (!(noise_temperature(noise) > 0.0))
            throw InvalidInput("config: noise temperature must be > 0 (it sets the detector scale)");
        if (h0_calibration_trials < 0 || h0_audit_trials < 0)
            throw InvalidInput("config: trial counts must be >= 0");
    }
};

// ------------------------------------------------------------------------
// Value parsing

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true)
    {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

/// "0.5", "0.5 W", "20 dBm", "30 dBW" -> watts.
inline double parse_power(std::string_view text)
{
    std::string s = trim(text);
    auto ends_with = [&](std::string_view suffix) {
        return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    double watts = 0.0;
    if (ends_with("dBm"))
        watts = std::pow(10.0, (parse_double(s.substr(0, s.size() - 3)) - 30.0) / 10.0);
    else if (ends_with("dBW"))
        watts = std::pow(10.0, parse_double(s.substr(0, s.size() - 3)) / 10.0);
    else if (ends_with("W"))
        watts = parse_double(s.substr(0, s.size() - 1));
    else
        watts = parse_double(s);
    if (!(watts > 0.0) || !std::isfinite(watts))
        throw InvalidInput("power must be > 0: '" + s + "'");
    return watts;
}

inline double watts_to_dbw(double w) { return 10.0 * std::log10(w); }

inline long long parse_integer(std::string_view text)
{
    const std::string s = trim(text);
    long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw InvalidInput("not an integer: '" + s + "'");
    return v;
}

inline std::uint64_t parse_u64(std::string_view text)
{
    const std::string s = trim(text);
    std::uint64_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw InvalidInput("not an unsigned integer: '" + s + "'");
    return v;
}

inline bool parse_bool(std::string_view text)
{
    const std::string s = trim(text);
    if (s == "true" || s == "on" || s == "yes" || s == "1")
        return true;
    if (s == "false" || s == "off" || s == "no" || s == "0")
        return false;
    throw InvalidInput("not a boolean: '" + s + "'");
}

inline Vec3 parse_vec3(std::string_view text)
{
    const auto parts = split(text, ',');
    if (parts.size() != 3)
        throw InvalidInput("expected 'x, y, z', got '" + std::string(text) + "'");
    return {parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])};
}

inline std::string format_vec3(const Vec3 &v)
{
    return format_double(v[0]) + ", " + format_double(v[1]) + ", " + format_double(v[2]);
}

// ------------------------------------------------------------------------
// Schema

struct ConfigKey
{
    std::string name;
    std::string doc;
    std::function<void(ScenarioConfig &, const std::string &)> set;
    std::function<std::string(const ScenarioConfig &)> get;
};

inline std::string join_doubles(const std::vector<double> &v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? ", " : "") + format_double(v[i]);
    return s;
}

inline const std::vector<ConfigKey> &config_schema()
{
    using C = ScenarioConfig;
    using S = const std::string &;
    static const std::vector<ConfigKey> keys = {
        // geometry
        {"tx_position", "TX satellite position [m]", [](C &c, S v) { c.geometry.tx_position = parse_vec3(v); },
         [](const C &c) { return format_vec3(c.geometry.tx_position); }},
        {"rx_position", "RX satellite position [m]", [](C &c, S v) { c.geometry.rx_position = parse_vec3(v); },
         [](const C &c) { return format_vec3(c.geometry.rx_position); }},
        {"tx_array_axis", "TX ULA axis direction", [](C &c, S v) { c.geometry.tx_array_axis = parse_vec3(v); },
         [](const C &c) { return format_vec3(c.geometry.tx_array_axis); }},
        {"rx_array_axis", "RX ULA axis direction", [](C &c, S v) { c.geometry.rx_array_axis = parse_vec3(v); },
         [](const C &c) { return format_vec3(c.geometry.rx_array_axis); }},
        {"debris_positions", "fixed H1 debris positions 'x,y,z; x,y,z' [m]; empty = sample in box",
         [](C &c, S v) {
             c.geometry.debris_positions.clear();
             if (trim(v).empty())
                 return;
             for (const auto &p : split(v, ';'))
                 c.geometry.debris_positions.push_back(parse_vec3(p));
         },
         [](const C &c) {
             std::string s;
             for (std::size_t i = 0; i < c.geometry.debris_positions.size(); ++i)
                 s += (i ? "; " : "") + format_vec3(c.geometry.debris_positions[i]);
             return s;
         }},
        {"debris_box_min", "lower corner of the debris sampling box [m]",
         [](C &c, S v) { c.debris_box_min = parse_vec3(v); }, [](const C &c) { return format_vec3(c.debris_box_min); }},
        {"debris_box_max", "upper corner of the debris sampling box [m]",
         [](C &c, S v) { c.debris_box_max = parse_vec3(v); }, [](const C &c) { return format_vec3(c.debris_box_max); }},
        {"carrier_frequency", "carrier frequency f [Hz]",
         [](C &c, S v) { c.geometry.carrier_frequency = parse_double(v); },
         [](const C &c) { return format_double(c.geometry.carrier_frequency); }},
        {"sampling_rate", "sampling rate f_s [Hz]", [](C &c, S v) { c.geometry.sampling_rate = parse_double(v); },
         [](const C &c) { return format_double(c.geometry.sampling_rate); }},
        {"total_subcarriers", "total OFDM subcarriers Kbar",
         [](C &c, S v) { c.geometry.total_subcarriers = c.probe.total_subcarriers = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.probe.total_subcarriers); }},
        {"absorption_coefficient", "molecular absorption k(f) [1/m]",
         [](C &c, S v) { c.geometry.absorption_coefficient = parse_double(v); },
         [](const C &c) { return format_double(c.geometry.absorption_coefficient); }},
        {"refractive_index", "debris refractive index eta (physical reflection mode)",
         [](C &c, S v) { c.geometry.refractive_index = parse_double(v); },
         [](const C &c) { return format_double(c.geometry.refractive_index); }},
        {"surface_roughness", "debris surface height std dev sigma [m]",
         [](C &c, S v) { c.geometry.surface_roughness = parse_double(v); },
         [](const C &c) { return format_double(c.geometry.surface_roughness); }},
        {"reflection_mode", "physical | uniform_random",
         [](C &c, S v) {
             const auto s = trim(v);
             if (s == "physical")
                 c.geometry.reflection_mode = ReflectionMode::physical;
             else if (s == "uniform_random")
                 c.geometry.reflection_mode = ReflectionMode::uniform_random;
             else
                 throw InvalidInput("reflection_mode must be physical or uniform_random");
         },
         [](const C &c) {
             return std::string(c.geometry.reflection_mode == ReflectionMode::physical ? "physical" : "uniform_random");
         }},
        // noise
        {"brightness_temperature", "solar brightness temperature T_b [K]",
         [](C &c, S v) { c.noise.brightness_temperature = parse_double(v); },
         [](const C &c) { return format_double(c.noise.brightness_temperature); }},
        {"ambient_temperature", "ambient noise temperature T_0 [K]",
         [](C &c, S v) { c.noise.ambient_temperature = parse_double(v); },
         [](const C &c) { return format_double(c.noise.ambient_temperature); }},
        {"bandwidth", "bandwidth B [Hz]", [](C &c, S v) { c.noise.bandwidth = parse_double(v); },
         [](const C &c) { return format_double(c.noise.bandwidth); }},
        {"noise_enabled", "inject receiver noise (true/false)", [](C &c, S v) { c.noise_enabled = parse_bool(v); },
         [](const C &c) { return std::string(c.noise_enabled ? "true" : "false"); }},
        {"noise_margin", "detector input scaling margin over the noise spectral level",
         [](C &c, S v) { c.noise_margin = parse_double(v); },
         [](const C &c) { return format_double(c.noise_margin); }},
        // probing
        {"n_tx", "TX antennas", [](C &c, S v) { c.probe.n_tx = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.probe.n_tx); }},
        {"n_rx", "RX antennas", [](C &c, S v) { c.probe.n_rx = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.probe.n_rx); }},
        {"rf_chains_tx", "TX RF chains (descriptive)",
         [](C &c, S v) { c.probe.rf_chains_tx = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.probe.rf_chains_tx); }},
        {"rf_chains_rx", "RX RF chains (descriptive)",
         [](C &c, S v) { c.probe.rf_chains_rx = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.probe.rf_chains_rx); }},
        {"frames", "time frames T", [](C &c, S v) { c.probe.frames = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.probe.frames); }},
        {"subframes", "sub-frames per frame M", [](C &c, S v) { c.probe.subframes = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.probe.subframes); }},
        {"training_subcarriers", "training subcarriers K (single runs; sweeps use k_grid)",
         [](C &c, S v) { c.probe.training_subcarriers = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.probe.training_subcarriers); }},
        {"transmit_power", "transmit power P_T (W, dBW or dBm; single runs)",
         [](C &c, S v) { c.probe.transmit_power = parse_power(v); },
         [](const C &c) { return format_double(c.probe.transmit_power); }},
        // solver
        {"rank_max", "overestimated CP rank", [](C &c, S v) { c.als.rank_max = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.als.rank_max); }},
        {"mu", "ridge weight (single runs; sweeps use mu_grid)", [](C &c, S v) { c.als.mu = parse_double(v); },
         [](const C &c) { return format_double(c.als.mu); }},
        {"epsilon", "absolute residual tolerance", [](C &c, S v) { c.als.epsilon = parse_double(v); },
         [](const C &c) { return format_double(c.als.epsilon); }},
        {"max_iterations", "ALS sweep cap", [](C &c, S v) { c.als.max_iterations = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.als.max_iterations); }},
        {"rel_change_tol", "relative objective change tolerance",
         [](C &c, S v) { c.als.rel_change_tol = parse_double(v); },
         [](const C &c) { return format_double(c.als.rel_change_tol); }},
        {"init", "gevd | random",
         [](C &c, S v) {
             const auto s = trim(v);
             if (s == "gevd")
                 c.als.init = InitMethod::gevd;
             else if (s == "random")
                 c.als.init = InitMethod::random;
             else
                 throw InvalidInput("init must be gevd or random");
         },
         [](const C &c) { return std::string(c.als.init == InitMethod::gevd ? "gevd" : "random"); }},
        {"restarts", "ALS solves per tensor", [](C &c, S v) { c.als.restarts = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.als.restarts); }},
        {"threshold_rel", "relative singular-value threshold", [](C &c, S v) { c.threshold_rel = parse_double(v); },
         [](const C &c) { return format_double(c.threshold_rel); }},
        // sweep
        {"power_grid", "transmit powers, comma separated (W, dBW or dBm)",
         [](C &c, S v) {
             c.sweep.power_grid.clear();
             for (const auto &p : split(v, ','))
                 c.sweep.power_grid.push_back(parse_power(p));
         },
         [](const C &c) { return join_doubles(c.sweep.power_grid); }},
        {"mu_grid", "ridge weights, comma separated",
         [](C &c, S v) {
             c.sweep.mu_grid.clear();
             for (const auto &p : split(v, ','))
                 c.sweep.mu_grid.push_back(parse_double(p));
         },
         [](const C &c) { return join_doubles(c.sweep.mu_grid); }},
        {"k_grid", "training subcarrier counts, comma separated",
         [](C &c, S v) {
             c.sweep.k_grid.clear();
             for (const auto &p : split(v, ','))
                 c.sweep.k_grid.push_back(static_cast<int>(parse_integer(p)));
         },
         [](const C &c) {
             std::string s;
             for (std::size_t i = 0; i < c.sweep.k_grid.size(); ++i)
                 s += (i ? ", " : "") + std::to_string(c.sweep.k_grid[i]);
             return s;
         }},
        {"trials_per_point", "H1 trials per grid point",
         [](C &c, S v) { c.sweep.trials_per_point = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.sweep.trials_per_point); }},
        {"debris_count_h1", "debris objects under H1",
         [](C &c, S v) { c.sweep.debris_count_h1 = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.sweep.debris_count_h1); }},
        {"master_seed", "seed for every random draw", [](C &c, S v) { c.sweep.master_seed = parse_u64(v); },
         [](const C &c) { return std::to_string(c.sweep.master_seed); }},
        {"target_pfa", "EBD false-alarm target", [](C &c, S v) { c.target_pfa = parse_double(v); },
         [](const C &c) { return format_double(c.target_pfa); }},
        {"h0_calibration_trials", "H0 energies for EBD calibration (0 = trials_per_point, min 100)",
         [](C &c, S v) { c.h0_calibration_trials = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.h0_calibration_trials); }},
        {"h0_audit_trials", "H0 trials for the false-alarm audit (0 = trials_per_point)",
         [](C &c, S v) { c.h0_audit_trials = static_cast<int>(parse_integer(v)); },
         [](const C &c) { return std::to_string(c.h0_audit_trials); }},
    };
    return keys;
}

/// Applies "key = value" lines on top of cfg. Throws InvalidInput with the line number.
inline void apply_config_text(ScenarioConfig &cfg, std::istream &is)
{
    std::map<std::string, const ConfigKey *> by_name;
    for (const auto &k : config_schema())
        by_name[k.name] = &k;
    std::map<std::string, int> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line))
    {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (trim(line).empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto it = by_name.find(key);
        if (it == by_name.end())
            throw InvalidInput("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (const auto prev = seen.find(key); prev != seen.end())
            throw InvalidInput("config line " + std::to_string(lineno) + ": duplicate key '" + key +
                               "' (first on line " + std::to_string(prev->second) + ")");
        seen[key] = lineno;
        try
        {
            it->second->set(cfg, value);
        }
        catch (const InvalidInput &e)
        {
            throw InvalidInput("config line " + std::to_string(lineno) + " (" + key + "): " + e.what());
        }
    }
}

inline ScenarioConfig parse_config(std::istream &is)
{
    ScenarioConfig cfg;
    apply_config_text(cfg, is);
    cfg.validate();
    return cfg;
}

inline ScenarioConfig parse_config_string(const std::string &text)
{
    std::istringstream is(text);
    return parse_config(is);
}

inline ScenarioConfig load_config(const std::string &path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open config", path);
    return parse_config(is);
}

/// Every key with its current value, in schema order. Parses back to the same config.
inline std::string dump_config(const ScenarioConfig &cfg, bool with_docs = false)
{
    std::string out;
    for (const auto &k : config_schema())
    {
        if (with_docs)
            out += "# " + k.doc + "\n";
        out += k.name + " = " + k.get(cfg) + "\n";
    }
    return out;
}

} // namespace debris
