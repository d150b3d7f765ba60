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

// debris_cli: command-line front end for sweeps, calibration and single decompositions.
//
//   debris_cli run       --config scenarios/default.cfg --out-dir out
//   debris_cli calibrate --config scenarios/default.cfg --out-dir out
//   debris_cli decompose --input y.ct3 --out-dir out --rank-max 6 --mu 0.08
//   debris_cli plot      --input out/sweep.csv --out-dir out
//   debris_cli simulate  --config scenarios/default.cfg --power 10 --output y.ct3
//
// Exit codes: 0 success, 2 configuration or usage error, 3 runtime failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include <debris/config.hpp>
#include <debris/ct3_io.hpp>
#include <debris/harness.hpp>
#include <debris/report.hpp>

namespace fs = std::filesystem;
using namespace debris;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_runtime = 3;

struct CommonOptions
{
    std::string config;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string formats = "csv,json,svg";
};

struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

ScenarioConfig load_scenario(const CommonOptions &o)
{
    ScenarioConfig cfg;
    try
    {
        if (!o.config.empty())
            cfg = load_config(o.config);
        if (o.seed)
            cfg.sweep.master_seed = *o.seed;
        cfg.validate();
    }
    catch (const IoError &e)
    {
        throw ConfigError(std::string(e.what()) + ": " + e.path());
    }
    catch (const InvalidInput &e)
    {
        throw ConfigError(e.what());
    }
    return cfg;
}

int resolve_threads(int requested)
{
    if (requested > 0)
        return requested;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::set<OutputFormat> resolve_formats(const std::string &text)
{
    try
    {
        return parse_formats(text);
    }
    catch (const InvalidInput &e)
    {
        throw ConfigError(e.what());
    }
}

void add_common(CLI::App *cmd, CommonOptions &o)
{
    cmd->add_option("--config", o.config, "scenario config file (key = value lines)");
    cmd->add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", o.seed, "master seed (overrides the config)");
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)")->capture_default_str();
    cmd->add_option("--formats", o.formats, "comma list of csv,json,svg (none = no files)")->capture_default_str();
}

void print_written(const std::vector<fs::path> &files)
{
    for (const auto &f : files)
        std::cout << f.string() << "\n";
}

int cmd_run(const CommonOptions &o)
{
    const ScenarioConfig cfg = load_scenario(o);
    const auto formats = resolve_formats(o.formats);
    SweepOptions opt;
    opt.threads = resolve_threads(o.threads);
    opt.keep_records = false;
    opt.progress = [](const std::string &msg) { std::cerr << "sweep: " << msg << "\n"; };

    const SweepReport report = run_sweep(cfg, opt);
    print_written(emit_report(report, formats, o.out_dir));

    const double total = report.timing.total_ms;
    const double solver = report.timing.detector_ms / opt.threads;
    std::fprintf(stderr, "profile: wall %.1f ms, TBD solver %.1f ms (per thread), harness overhead %.2f%%\n", total,
                 solver, total > 0.0 ? 100.0 * std::max(0.0, total - solver) / total : 0.0);
    return exit_ok;
}

int cmd_calibrate(const CommonOptions &o)
{
    const ScenarioConfig cfg = load_scenario(o);
    const auto formats = resolve_formats(o.formats);
    const auto cals = run_calibration(cfg, resolve_threads(o.threads));

    std::vector<fs::path> written;
    if (formats.empty())
        std::cerr << "warning: no output formats selected, nothing written\n";
    else
        ensure_directory(o.out_dir);
    if (formats.count(OutputFormat::csv))
    {
        std::string csv = "power_w,k,threshold,target_pfa,achieved_pfa,trials_used\n";
        for (const auto &c : cals)
            csv += format_double(c.power_w) + "," + std::to_string(c.k) + "," + format_double(c.calibration.threshold) +
                   "," + format_double(c.calibration.target_pfa) + "," + format_double(c.calibration.achieved_pfa) +
                   "," + std::to_string(c.calibration.trials_used) + "\n";
        written.push_back(fs::path(o.out_dir) / "calibration.csv");
        write_text_file(written.back(), csv);
    }
    if (formats.count(OutputFormat::json))
    {
        SweepReport r;
        r.config_echo = dump_config(cfg);
        r.calibrations = cals;
        nlohmann::ordered_json j = report_to_json(r);
        j.erase("points");
        written.push_back(fs::path(o.out_dir) / "calibration.json");
        write_text_file(written.back(), j.dump(2) + "\n");
    }
    if (formats.count(OutputFormat::svg))
        std::cerr << "note: calibrate has no plots, svg ignored\n";
    print_written(written);
    return exit_ok;
}

std::string factor_csv(const CMatrix &m)
{
    std::string out = "row,component,re,im\n";
    for (Eigen::Index f = 0; f < m.cols(); ++f)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            out += std::to_string(r) + "," + std::to_string(f) + "," + format_double(m(r, f).real()) + "," +
                   format_double(m(r, f).imag()) + "\n";
    return out;
}

struct DecomposeOptions
{
    std::string input;
    std::string out_dir = "out";
    int rank_max = AlsConfig{}.rank_max;
    double mu = AlsConfig{}.mu;
    double threshold_rel = 1e-3;
    int restarts = AlsConfig{}.restarts;
    std::uint64_t seed = 0;
};

int cmd_decompose(const DecomposeOptions &o)
{
    AlsConfig als;
    als.rank_max = o.rank_max;
    als.mu = o.mu;
    als.restarts = o.restarts;
    als.seed = o.seed;
    try
    {
        als.validate();
        if (!(o.threshold_rel > 0.0 && o.threshold_rel < 1.0))
            throw InvalidInput("threshold-rel must lie in (0, 1)");
    }
    catch (const InvalidInput &e)
    {
        throw ConfigError(e.what());
    }

    const ComplexTensor3 y = load_ct3(o.input);
    const PathEstimate est = estimate_paths_detailed(y, als, o.threshold_rel);
    const FactorSet &f = est.factors;

    ensure_directory(o.out_dir);
    const fs::path dir(o.out_dir);
    write_text_file(dir / "factor_A.csv", factor_csv(f.A));
    write_text_file(dir / "factor_B.csv", factor_csv(f.B));
    write_text_file(dir / "factor_C.csv", factor_csv(f.C));

    nlohmann::ordered_json j;
    j["input"] = o.input;
    j["dims"] = {y.dims().I, y.dims().J, y.dims().K};
    j["rank_max"] = o.rank_max;
    j["mu"] = o.mu;
    j["threshold_rel"] = o.threshold_rel;
    j["combined_rank"] = est.rank.combined_rank;
    j["per_factor_ranks"] = est.rank.per_factor_ranks;
    j["final_residual"] = f.final_residual;
    j["objective"] = est.objective;
    j["iterations_used"] = f.iterations_used;
    j["restarts"] = est.restarts_run;
    write_text_file(dir / "decompose.json", j.dump(2) + "\n");

    std::cout << "estimated paths: " << est.rank.combined_rank << "\n";
    return exit_ok;
}

int cmd_plot(const std::string &input, const std::string &out_dir)
{
    std::ifstream is(input);
    if (!is)
        throw IoError("cannot open", input);
    const auto points = parse_sweep_csv(is);
    if (points.empty())
        throw InvalidInput("no data rows in " + input);
    ensure_directory(out_dir);
    std::vector<fs::path> written;
    for (const auto &[name, svg] : render_sweep_svgs(points))
    {
        written.push_back(fs::path(out_dir) / name);
        write_text_file(written.back(), svg);
    }
    print_written(written);
    return exit_ok;
}

struct SimulateOptions
{
    double power_w = 1.0;
    int k = 0;
    std::string hypothesis = "h1";
    std::uint64_t trial = 0;
    std::string output = "y.ct3";
};

int cmd_simulate(const CommonOptions &o, const SimulateOptions &s)
{
    const ScenarioConfig cfg = load_scenario(o);
    if (s.hypothesis != "h0" && s.hypothesis != "h1")
        throw ConfigError("--hypothesis must be h0 or h1");
    const int k = s.k > 0 ? s.k : cfg.probe.training_subcarriers;
    if (k > cfg.probe.total_subcarriers || !(s.power_w > 0.0))
        throw ConfigError("invalid --k or --power");
    const bool h1 = s.hypothesis == "h1";
    const auto seed = trial_seed(cfg.sweep.master_seed, h1 ? TrialKind::h1 : TrialKind::audit, s.trial);
    const Realization r = make_realization(cfg, s.power_w, k, h1 ? Hypothesis::H1 : Hypothesis::H0, seed);
    save_ct3(s.output, to_detector_units(r.tensor, r.noise_var, cfg.noise_margin));
    std::cout << s.output << " (true paths: " << r.true_L << ")\n";
    return exit_ok;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"debris_cli: tensor-based space debris detection experiments"};
    app.require_subcommand(1);

    CommonOptions run_opt, cal_opt, sim_opt;
    auto *run = app.add_subcommand("run", "Monte Carlo sweep over power, mu and K");
    add_common(run, run_opt);
    auto *cal = app.add_subcommand("calibrate", "EBD thresholds only");
    add_common(cal, cal_opt);

    DecomposeOptions dec_opt;
    auto *dec = app.add_subcommand("decompose", "rank estimate of one CT3 tensor file");
    dec->add_option("--input", dec_opt.input, "CT3 tensor file")->required();
    dec->add_option("--out-dir", dec_opt.out_dir, "output directory")->capture_default_str();
    dec->add_option("--rank-max", dec_opt.rank_max, "overestimated rank")->capture_default_str();
    dec->add_option("--mu", dec_opt.mu, "ridge weight")->capture_default_str();
    dec->add_option("--threshold-rel", dec_opt.threshold_rel, "relative singular-value threshold")
        ->capture_default_str();
    dec->add_option("--restarts", dec_opt.restarts, "ALS restarts")->capture_default_str();
    dec->add_option("--seed", dec_opt.seed, "solver seed")->capture_default_str();

    std::string plot_input, plot_out = "out";
    auto *plot = app.add_subcommand("plot", "re-render SVG plots from sweep.csv");
    plot->add_option("--input", plot_input, "sweep.csv")->required();
    plot->add_option("--out-dir", plot_out, "output directory")->capture_default_str();

    SimulateOptions sim;
    auto *simc = app.add_subcommand("simulate", "write one received tensor (detector units) as CT3");
    add_common(simc, sim_opt);
    simc->add_option("--power", sim.power_w, "transmit power in W")->capture_default_str();
    simc->add_option("--k", sim.k, "training subcarriers (0 = config value)");
    simc->add_option("--hypothesis", sim.hypothesis, "h0 or h1")->capture_default_str();
    simc->add_option("--trial", sim.trial, "trial index")->capture_default_str();
    simc->add_option("--output", sim.output, "CT3 output path")->capture_default_str();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_config;
    }

    try
    {
        if (*run)
            return cmd_run(run_opt);
        if (*cal)
            return cmd_calibrate(cal_opt);
        if (*dec)
            return cmd_decompose(dec_opt);
        if (*plot)
            return cmd_plot(plot_input, plot_out);
        if (*simc)
            return cmd_simulate(sim_opt, sim);
    }
    catch (const ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const IoError &e)
    {
        std::cerr << "error: " << e.what() << ": " << e.path() << "\n";
        return exit_runtime;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_runtime;
}
