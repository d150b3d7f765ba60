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
 * \file harness.hpp
 * \brief Monte Carlo sweeps comparing the tensor-based and energy detectors.
 *
 * Seeding: every realization is drawn from
 *
 *   trial_seed = derive_seed(master_seed, {hypothesis_tag, trial_index})
 *
 * with tags 0 = H0 calibration, 1 = H1, 2 = H0 false-alarm audit. Inside a
 * trial, independent streams for debris/reflection, probes, noise and the
 * ALS restarts are derived from trial_seed with keys 1..4. Grid coordinates
 * (power, mu, K) do not enter the seed: the same debris, probes and noise are
 * reused across grid points (common random numbers), and adding grid points
 * never changes an existing point's draws. Aggregation is ordered by trial
 * index, so the thread count cannot change the result.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "channel.hpp"
#include "config.hpp"
#include "cpd.hpp"
#include "detectors.hpp"
#include "rng.hpp"
#include "signal.hpp"

namespace debris
{

enum class Hypothesis
{
    H0,
    H1
};

enum class DetectorKind
{
    TBD,
    EBD
};

inline const char *to_string(DetectorKind d) { return d == DetectorKind::TBD ? "TBD" : "EBD"; }
inline const char *to_string(Hypothesis h) { return h == Hypothesis::H0 ? "H0" : "H1"; }

enum class TrialKind : std::uint64_t
{
    calibration = 0,
    h1 = 1,
    audit = 2
};

struct TrialRecord
{
    std::uint64_t trial_id = 0; ///< trial index within its hypothesis set
    Hypothesis hypothesis = Hypothesis::H0;
    int true_L = 1;
    DetectorKind detector = DetectorKind::TBD;
    double power_w = 0.0;
    double mu = std::numeric_limits<double>::quiet_NaN(); // TBD only
    int k = 0;
    DetectionOutcome outcome;
    double wall_time_ms = 0.0;
};

struct Realization
{
    ComplexTensor3 tensor;
    int true_L = 1;
    double noise_var = 0.0;   ///< reference per-entry noise variance (even when noise is off)
    std::uint64_t als_seed = 0;
};

inline std::uint64_t trial_seed(std::uint64_t master, TrialKind kind, std::uint64_t index)
{
    return derive_seed(master, {static_cast<std::uint64_t>(kind), index});
}

/// One received tensor for the given grid coordinates.
inline Realization make_realization(const ScenarioConfig &cfg, double power_w, int k, Hypothesis hyp,
                                    std::uint64_t seed)
{
    Rng scene_rng(derive_seed(seed, {1}));
    Rng probe_rng(derive_seed(seed, {2}));
    Rng noise_rng(derive_seed(seed, {3}));

    GeometryConfig geom = cfg.geometry;
    if (hyp == Hypothesis::H0)
        geom.debris_positions.clear();
    else if (geom.debris_positions.empty())
        geom.debris_positions =
            sample_debris_positions(cfg.debris_box_min, cfg.debris_box_max, cfg.sweep.debris_count_h1, scene_rng);

    ProbeConfig probe = cfg.probe;
    probe.transmit_power = power_w;
    probe.training_subcarriers = k;

    const PathSet ps = build_path_set(geom, scene_rng);
    const ProbeMatrices pm = generate_probes(probe, probe_rng);

    Realization r;
    r.noise_var = subcarrier_noise_power(cfg.noise, cfg.probe.total_subcarriers);
    r.tensor = build_received_tensor(ps, pm, probe, geom.sampling_rate, cfg.noise_enabled ? r.noise_var : 0.0,
                                     noise_rng);
    r.true_L = static_cast<int>(ps.L());
    r.als_seed = derive_seed(seed, {4});
    return r;
}

/// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first exception.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &fn)
{
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers == 1 || n <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = n;
                }
            }
        });
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

struct TrialInfo
{
    Hypothesis hypothesis;
    int true_L;
    double power_w;
    double mu;
    int k;
};

/// Replacement for the tensor-based detector (tests use stubs); receives the scaled tensor.
using TbdOverride = std::function<DetectionOutcome(const ComplexTensor3 &, const AlsConfig &, const TrialInfo &)>;

struct SweepOptions
{
    int threads = 1;
    TbdOverride tbd_override;
    bool keep_records = true;
    std::function<void(const std::string &)> progress;
};

struct PointResult
{
    double power_w = 0.0;
    double mu = std::numeric_limits<double>::quiet_NaN(); ///< NaN for EBD rows
    int k = 0;
    DetectorKind detector = DetectorKind::TBD;
    double p_d = 0.0;
    double p_m = 1.0;
    double p_fa = 0.0;
    int n_trials = 0;    ///< valid H1 trials
    int n_failures = 0;  ///< H1 + H0 audit trials with an inconclusive outcome
    int n_h0 = 0;        ///< valid H0 audit trials
};

struct CalibrationPoint
{
    double power_w = 0.0;
    int k = 0;
    CalibrationResult calibration;
};

struct SweepTiming
{
    double total_ms = 0.0;
    double detector_ms = 0.0; ///< time inside the TBD solver
};

struct SweepReport
{
    int format_version = 1;
    std::string config_echo;      ///< dump_config() of the effective config
    std::vector<PointResult> points;
    std::vector<CalibrationPoint> calibrations;
    std::vector<TrialRecord> records;
    SweepTiming timing;
};

namespace detail
{
struct Tally
{
    int detections = 0, valid_h1 = 0, false_alarms = 0, valid_h0 = 0, failures = 0;

    PointResult finish(PointResult p) const
    {
        p.n_trials = valid_h1;
        p.n_h0 = valid_h0;
        p.n_failures = failures;
        p.p_d = valid_h1 > 0 ? static_cast<double>(detections) / valid_h1 : 0.0;
        p.p_m = 1.0 - p.p_d;
        p.p_fa = valid_h0 > 0 ? static_cast<double>(false_alarms) / valid_h0 : 0.0;
        return p;
    }

    void add(const DetectionOutcome &o, Hypothesis h)
    {
        if (o.inconclusive)
        {
            ++failures;
            return;
        }
        if (h == Hypothesis::H1)
        {
            ++valid_h1;
            detections += o.detected ? 1 : 0;
        }
        else
        {
            ++valid_h0;
            false_alarms += o.detected ? 1 : 0;
        }
    }
};

inline double elapsed_ms(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}
} // namespace detail

/// H0 energies at one (power, K) point and the resulting EBD threshold.
inline CalibrationResult calibrate_point(const ScenarioConfig &cfg, double power_w, int k, int threads = 1)
{
    const auto n = static_cast<std::size_t>(cfg.calibration_trials());
    std::vector<double> energies(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const auto seed = trial_seed(cfg.sweep.master_seed, TrialKind::calibration, i);
        energies[i] = squared_norm(make_realization(cfg, power_w, k, Hypothesis::H0, seed).tensor);
    });
    return ebd_calibrate(std::move(energies), cfg.target_pfa);
}

/// EBD thresholds for every (power, K) grid point.
inline std::vector<CalibrationPoint> run_calibration(const ScenarioConfig &cfg, int threads = 1)
{
    cfg.validate();
    std::vector<CalibrationPoint> out;
    for (int k : cfg.sweep.k_grid)
        for (double p : cfg.sweep.power_grid)
            out.push_back({p, k, calibrate_point(cfg, p, k, threads)});
    return out;
}

inline SweepReport run_sweep(const ScenarioConfig &cfg, const SweepOptions &opt = {})
{
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();
    SweepReport report;
    report.config_echo = dump_config(cfg);
    std::atomic<long long> solver_us{0};

    const auto &grid = cfg.sweep;
    const auto n_mu = grid.mu_grid.size();
    const auto n_h1 = static_cast<std::size_t>(grid.trials_per_point);
    const auto n_h0 = static_cast<std::size_t>(cfg.audit_trials());

    for (int k : grid.k_grid)
    {
        for (double power : grid.power_grid)
        {
            if (opt.progress)
                opt.progress("K=" + std::to_string(k) + " P=" + format_double(power) + " W");
            const CalibrationResult cal = calibrate_point(cfg, power, k, opt.threads);
            report.calibrations.push_back({power, k, cal});

            // jobs: H1 trials first, then H0 audit trials; each yields 1 EBD + n_mu TBD records
            const std::size_t n_jobs = n_h1 + n_h0;
            std::vector<std::vector<TrialRecord>> results(n_jobs);
            parallel_for(n_jobs, opt.threads, [&](std::size_t job) {
                const bool is_h1 = job < n_h1;
                const std::size_t idx = is_h1 ? job : job - n_h1;
                const Hypothesis hyp = is_h1 ? Hypothesis::H1 : Hypothesis::H0;
                const auto seed =
                    trial_seed(grid.master_seed, is_h1 ? TrialKind::h1 : TrialKind::audit, static_cast<std::uint64_t>(idx));
                const Realization real = make_realization(cfg, power, k, hyp, seed);

                std::vector<TrialRecord> &recs = results[job];
                TrialRecord base;
                base.trial_id = idx;
                base.hypothesis = hyp;
                base.true_L = real.true_L;
                base.power_w = power;
                base.k = k;

                auto t0 = std::chrono::steady_clock::now();
                TrialRecord ebd = base;
                ebd.detector = DetectorKind::EBD;
                ebd.outcome = ebd_detect(real.tensor, cal);
                ebd.wall_time_ms = detail::elapsed_ms(t0);
                recs.push_back(ebd);

                const ComplexTensor3 scaled = to_detector_units(real.tensor, real.noise_var, cfg.noise_margin);
                for (double mu : grid.mu_grid)
                {
                    AlsConfig als = cfg.als;
                    als.mu = mu;
                    als.seed = real.als_seed;
                    TrialRecord tbd = base;
                    tbd.detector = DetectorKind::TBD;
                    tbd.mu = mu;
                    t0 = std::chrono::steady_clock::now();
                    tbd.outcome = opt.tbd_override
                                      ? opt.tbd_override(scaled, als, TrialInfo{hyp, real.true_L, power, mu, k})
                                      : tbd_detect(scaled, als, cfg.threshold_rel);
                    tbd.wall_time_ms = detail::elapsed_ms(t0);
                    solver_us += static_cast<long long>(tbd.wall_time_ms * 1000.0);
                    recs.push_back(tbd);
                }
            });

            detail::Tally ebd_tally;
            std::vector<detail::Tally> tbd_tally(n_mu);
            for (const auto &recs : results)
                for (const auto &r : recs)
                {
                    if (r.detector == DetectorKind::EBD)
                        ebd_tally.add(r.outcome, r.hypothesis);
                    else
                    {
                        const auto m = static_cast<std::size_t>(
                            std::find(grid.mu_grid.begin(), grid.mu_grid.end(), r.mu) - grid.mu_grid.begin());
                        tbd_tally[m].add(r.outcome, r.hypothesis);
                    }
                }

            for (std::size_t m = 0; m < n_mu; ++m)
            {
                PointResult p;
                p.power_w = power;
                p.mu = grid.mu_grid[m];
                p.k = k;
                p.detector = DetectorKind::TBD;
                report.points.push_back(tbd_tally[m].finish(p));
            }
            PointResult e;
            e.power_w = power;
            e.k = k;
            e.detector = DetectorKind::EBD;
            report.points.push_back(ebd_tally.finish(e));

            if (opt.keep_records)
                for (auto &recs : results)
                    for (auto &r : recs)
                        report.records.push_back(std::move(r));
        }
    }
    report.timing.total_ms = detail::elapsed_ms(t_start);
    report.timing.detector_ms = static_cast<double>(solver_us.load()) / 1000.0;
    return report;
}

} // namespace debris
