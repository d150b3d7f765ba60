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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance            run every criterion
//   acceptance 3 5        run only criteria 3 and 5

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <debris/cpd.hpp>
#include <debris/harness.hpp>
#include <debris/report.hpp>

#include "test_util.hpp"

using namespace debris;
namespace fs = std::filesystem;

namespace
{

struct Verdict
{
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char *f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int hardware_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

// ------------------------------------------------------------------------

Verdict algebra_oracles()
{
    const auto t0 = Clock::now();
    std::mt19937_64 g(1001);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    std::uniform_int_distribution<int> mode(1, 3), rank(1, 5);
    double worst_fold = 0.0, worst_kr = 0.0, worst_cp = 0.0;
    for (int t = 0; t < 1000; ++t)
    {
        const Dims3 d{dim(g), dim(g), dim(g)};
        const ComplexTensor3 x = oracle::random_tensor(d, g);
        const int m = mode(g);
        const CMatrix u = unfold(x, m);
        worst_fold = std::max(worst_fold, (u - oracle::unfold(x, m)).norm() / u.norm());
        worst_fold = std::max(worst_fold, oracle::rel_error(fold(u, m, d), x));

        const int f = rank(g);
        const CMatrix p = oracle::random_cmatrix(static_cast<Eigen::Index>(dim(g)), f, g);
        const CMatrix q = oracle::random_cmatrix(static_cast<Eigen::Index>(dim(g)), f, g);
        const CMatrix kr = oracle::khatri_rao(p, q);
        worst_kr = std::max(worst_kr, (khatri_rao(p, q) - kr).norm() / kr.norm());

        const CMatrix a = oracle::random_cmatrix(static_cast<Eigen::Index>(d.I), f, g);
        const CMatrix b = oracle::random_cmatrix(static_cast<Eigen::Index>(d.J), f, g);
        const CMatrix c = oracle::random_cmatrix(static_cast<Eigen::Index>(d.K), f, g);
        worst_cp = std::max(worst_cp, oracle::rel_error(cp_reconstruct({a, b, c}), oracle::triple_sum(a, b, c)));
    }
    const double secs = seconds_since(t0);
    const double worst = std::max({worst_fold, worst_kr, worst_cp});
    return {worst <= 1e-10 && secs < 30.0, "max rel err fold " + fmt("%.2e", worst_fold) + ", khatri-rao " +
                                               fmt("%.2e", worst_kr) + ", cp " + fmt("%.2e", worst_cp) + "; " +
                                               fmt("%.1f s", secs) + " (limit 30 s)"};
}

Verdict als_correctness()
{
    const auto t0 = Clock::now();
    std::mt19937_64 g(1002);
    double worst_increase = -std::numeric_limits<double>::infinity(), worst_normal = 0.0;
    for (int t = 0; t < 100; ++t)
    {
        const Dims3 d{static_cast<std::size_t>(5 + t % 4), static_cast<std::size_t>(4 + t % 3), 4};
        ComplexTensor3 y = cp_reconstruct(oracle::conditioned_cp(d, 1 + t % 3, g, 3.0));
        for (Eigen::Index n = 0; n < y.data().size(); ++n)
            y.data()(n) += 0.3 * oracle::randc(g);
        AlsConfig cfg;
        cfg.rank_max = 3;
        cfg.mu = 0.06 + 0.02 * (t % 3);
        cfg.seed = static_cast<std::uint64_t>(t);
        cfg.init = t % 2 ? InitMethod::random : InitMethod::gevd;
        double prev = std::numeric_limits<double>::infinity();
        als_cpd(y, cfg, [&](int, int m, const FactorSet &fs) {
            const double obj = regularized_objective(y, fs, cfg.mu);
            if (std::isfinite(prev))
                worst_increase = std::max(worst_increase, obj - prev);
            prev = obj;

            const CMatrix &x = m == 1 ? fs.A : m == 2 ? fs.B : fs.C;
            const CMatrix z = m == 1   ? oracle::khatri_rao(fs.C, fs.B)
                              : m == 2 ? oracle::khatri_rao(fs.C, fs.A)
                                       : oracle::khatri_rao(fs.B, fs.A);
            const CMatrix rhs = z.adjoint() * oracle::unfold(y, m).transpose();
            CMatrix lhs = z.adjoint() * z;
            lhs.diagonal().array() += cfg.mu;
            worst_normal = std::max(worst_normal, (lhs * x.transpose() - rhs).norm() / rhs.norm());
        });
    }
    const double secs = seconds_since(t0);
    return {worst_increase <= 1e-9 && worst_normal <= 1e-10 && secs < 60.0,
            "max objective increase " + fmt("%.2e", worst_increase) + " (slack 1e-9), max normal-eq residual " +
                fmt("%.2e", worst_normal) + " (limit 1e-10); " + fmt("%.1f s", secs) + " (limit 60 s)"};
}

Verdict noiseless_rank_recovery()
{
    const auto t0 = Clock::now();
    std::mt19937_64 g(1003);
    AlsConfig cfg;
    cfg.rank_max = 6;
    cfg.mu = 0.08;
    int ok = 0;
    std::map<int, int> misses;
    for (int t = 0; t < 200; ++t)
    {
        const int L = 1 + t % 3;
        const ComplexTensor3 y = cp_reconstruct(oracle::conditioned_cp({32, 20, 6}, L, g));
        cfg.seed = static_cast<std::uint64_t>(t);
        const int est = estimate_paths(y, cfg, 1e-3);
        if (est == L)
            ++ok;
        else
            ++misses[L];
    }
    const double secs = seconds_since(t0);
    std::string detail = std::to_string(ok) + "/200 recovered (need >= 198)";
    for (const auto &[L, n] : misses)
        detail += ", L=" + std::to_string(L) + " misses " + std::to_string(n);
    return {ok >= 198 && secs < 300.0, detail + "; " + fmt("%.1f s", secs) + " (limit 300 s)"};
}

Verdict construction_identity()
{
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (std::uint64_t t = 0; t < 50; ++t)
    {
        Rng rng(derive_seed(1004, {t}));
        GeometryConfig geom;
        geom.reflection_mode = t % 2 ? ReflectionMode::physical : ReflectionMode::uniform_random;
        geom.rx_position = Vec3(uniform(rng, 0.5, 5.0), 0.0, 0.0);
        const double D = geom.rx_position.x();
        geom.debris_positions = sample_debris_positions(Vec3(0.1 * D, 0.05 * D, -0.1 * D), Vec3(0.9 * D, 0.6 * D, 0.1 * D),
                                                        static_cast<int>(t % 4), rng);
        ProbeConfig probe;
        probe.training_subcarriers = 1 + static_cast<int>(t % 12);
        probe.transmit_power = std::pow(10.0, uniform(rng, -1.0, 3.0));
        const PathSet ps = build_path_set(geom, rng);
        const ProbeMatrices pm = generate_probes(probe, rng);
        Rng n1(t), n2(t);
        const ComplexTensor3 cp = build_received_tensor(ps, pm, probe, geom.sampling_rate, 0.0, n1);
        const ComplexTensor3 sw = build_received_tensor_slicewise(ps, pm, probe, geom, 0.0, n2);
        worst = std::max(worst, oracle::max_abs_diff(cp, sw) / cp.data().cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-10, "max entrywise rel diff " + fmt("%.2e", worst) + " over 50 scenarios (limit 1e-10); " +
                                fmt("%.1f s", seconds_since(t0))};
}

// ------------------------------------------------------------------------
// Detection criteria share sweeps at the default scenario.

const PointResult *find_point(const SweepReport &r, DetectorKind d, double power, int k, double mu)
{
    for (const auto &p : r.points)
        if (p.detector == d && p.power_w == power && p.k == k && (d == DetectorKind::EBD || p.mu == mu))
            return &p;
    return nullptr;
}

Verdict detection_gain()
{
    const auto t0 = Clock::now();
    ScenarioConfig cfg;
    const auto &grid = cfg.sweep.power_grid;
    const double mid = grid[grid.size() / 2];
    cfg.sweep.power_grid = {mid};
    cfg.sweep.mu_grid = {cfg.als.mu};
    cfg.sweep.trials_per_point = 500;
    cfg.h0_calibration_trials = 500;
    cfg.h0_audit_trials = 200;
    SweepOptions opt;
    opt.threads = hardware_threads();
    opt.keep_records = false;
    const SweepReport r = run_sweep(cfg, opt);
    const int k = cfg.probe.training_subcarriers;
    const PointResult *tbd = find_point(r, DetectorKind::TBD, mid, k, cfg.als.mu);
    const PointResult *ebd = find_point(r, DetectorKind::EBD, mid, k, 0.0);
    const double gap = tbd->p_d - ebd->p_d;
    const double secs = seconds_since(t0);
    return {gap >= 0.05 && secs < 1800.0,
            "P=" + format_double(mid) + " W, mu=" + format_double(cfg.als.mu) + ": TBD P_D " + fmt("%.3f", tbd->p_d) +
                " (P_FA " + fmt("%.3f", tbd->p_fa) + "), EBD P_D " + fmt("%.3f", ebd->p_d) + " (P_FA " +
                fmt("%.3f", ebd->p_fa) + "), gap " + fmt("%.3f", gap) + " (need >= 0.05), " +
                std::to_string(tbd->n_trials) + " trials; " + fmt("%.1f s", secs) + " (limit 1800 s)"};
}

struct TrendSweep
{
    SweepReport report;
    ScenarioConfig cfg;
    double secs = 0.0;
};

const TrendSweep &trend_sweep()
{
    static const TrendSweep s = [] {
        const auto t0 = Clock::now();
        TrendSweep out;
        out.cfg.sweep.k_grid = {6, 12};
        out.cfg.sweep.trials_per_point = 200;
        out.cfg.h0_calibration_trials = 200;
        out.cfg.h0_audit_trials = 100;
        SweepOptions opt;
        opt.threads = hardware_threads();
        opt.keep_records = false;
        out.report = run_sweep(out.cfg, opt);
        out.secs = seconds_since(t0);
        std::fprintf(stdout, "  trend sweep: %zu points, %.1f s (TBD solver %.1f s)\n", out.report.points.size(),
                     out.secs, out.report.timing.detector_ms / 1000.0 / opt.threads);
        for (const auto &p : out.report.points)
            std::fprintf(stdout, "    %s K=%-2d mu=%-5s P=%-6s P_D=%.3f P_FA=%.3f n=%d fail=%d\n", to_string(p.detector),
                         p.k, p.detector == DetectorKind::TBD ? format_double(p.mu).c_str() : "-",
                         format_double(p.power_w).c_str(), p.p_d, p.p_fa, p.n_trials, p.n_failures);
        return out;
    }();
    return s;
}

Verdict monotonic_trends()
{
    const TrendSweep &s = trend_sweep();
    const double slack = 0.05;
    double worst_power = 0.0, worst_k = 0.0;
    const auto &grid = s.cfg.sweep;
    for (double mu : grid.mu_grid)
        for (int k : grid.k_grid)
            for (std::size_t i = 1; i < grid.power_grid.size(); ++i)
            {
                const double lo = find_point(s.report, DetectorKind::TBD, grid.power_grid[i - 1], k, mu)->p_d;
                const double hi = find_point(s.report, DetectorKind::TBD, grid.power_grid[i], k, mu)->p_d;
                worst_power = std::max(worst_power, lo - hi);
            }
    for (double mu : grid.mu_grid)
        for (double p : grid.power_grid)
        {
            const double k6 = find_point(s.report, DetectorKind::TBD, p, 6, mu)->p_d;
            const double k12 = find_point(s.report, DetectorKind::TBD, p, 12, mu)->p_d;
            worst_k = std::max(worst_k, k6 - k12);
        }
    return {worst_power <= slack && worst_k <= slack,
            "largest P_D drop along power " + fmt("%.3f", worst_power) + ", K=6 over K=12 " + fmt("%.3f", worst_k) +
                " (slack 0.05)"};
}

Verdict mu_ordering()
{
    const TrendSweep &s = trend_sweep();
    const auto &grid = s.cfg.sweep;
    const int k = 6;
    double worst_order = -1.0, worst_dom = std::numeric_limits<double>::infinity();
    for (double p : grid.power_grid)
    {
        const double lo_mu = find_point(s.report, DetectorKind::TBD, p, k, 0.06)->p_d;
        const double hi_mu = find_point(s.report, DetectorKind::TBD, p, k, 0.1)->p_d;
        worst_order = std::max(worst_order, hi_mu - lo_mu);
        const double ebd = find_point(s.report, DetectorKind::EBD, p, k, 0.0)->p_d;
        for (double mu : grid.mu_grid)
            worst_dom = std::min(worst_dom, find_point(s.report, DetectorKind::TBD, p, k, mu)->p_d - ebd);
    }
    return {worst_order <= 0.05 && worst_dom >= 0.0,
            "max P_D(mu=0.1) - P_D(mu=0.06) " + fmt("%.3f", worst_order) + " (limit 0.05), min TBD - EBD margin " +
                fmt("%.3f", worst_dom) + " (need >= 0)"};
}

std::string slurp(const fs::path &p)
{
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

Verdict reproducibility()
{
    ScenarioConfig cfg;
    cfg.sweep.power_grid = {0.1, 10.0};
    cfg.sweep.k_grid = {6, 12};
    cfg.sweep.trials_per_point = 8;
    cfg.h0_audit_trials = 4;
    cfg.sweep.master_seed = 20261015;
    const auto formats = parse_formats("csv,json,svg");
    const fs::path base = fs::temp_directory_path() / "debris_acceptance_repro";
    fs::remove_all(base);
    std::vector<std::vector<fs::path>> runs;
    for (int threads : {1, 1, 4})
    {
        SweepOptions opt;
        opt.threads = threads;
        runs.push_back(emit_report(run_sweep(cfg, opt), formats, base / std::to_string(runs.size())));
    }
    bool same = true;
    std::size_t files = 0;
    for (std::size_t r = 1; r < runs.size(); ++r)
    {
        same = same && runs[r].size() == runs[0].size();
        for (std::size_t f = 0; same && f < runs[0].size(); ++f, ++files)
            same = slurp(runs[0][f]) == slurp(runs[r][f]);
    }
    fs::remove_all(base);
    return {same, std::to_string(runs[0].size()) + " files compared across 3 runs (threads 1, 1, 4): " +
                      (same ? "byte-identical" : "DIFFERENT")};
}

} // namespace

int main(int argc, char **argv)
{
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
        {"algebra oracle suite", algebra_oracles},
        {"ALS monotonicity and ridge normal equations", als_correctness},
        {"noiseless rank recovery", noiseless_rank_recovery},
        {"slice-wise vs CP tensor construction", construction_identity},
        {"TBD beats EBD at mid-grid power", detection_gain},
        {"P_D non-decreasing in power and K", monotonic_trends},
        {"mu ordering and TBD dominance over EBD", mu_ordering},
        {"byte-identical reruns across thread counts", reproducibility},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i)
        only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && !only.count(id))
            continue;
        Verdict v;
        try
        {
            v = criteria[i].second();
        }
        catch (const std::exception &e)
        {
            v = {false, std::string("exception: ") + e.what()};
        }
        failed += v.pass ? 0 : 1;
        std::printf("%s criterion %d: %s | %s\n", v.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
