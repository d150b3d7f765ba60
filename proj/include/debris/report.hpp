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
 * \file report.hpp
 * \brief CSV, JSON and SVG output for sweep reports.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "errors.hpp"
#include "harness.hpp"

namespace debris
{

enum class OutputFormat
{
    csv,
    json,
    svg
};

/// Parses "csv,json,svg" (any subset, any order). An empty string or "none" gives an empty set.
inline std::set<OutputFormat> parse_formats(std::string_view text)
{
    std::set<OutputFormat> out;
    for (const auto &tok : split(text, ','))
    {
        const std::string t = trim(tok);
        if (t.empty() || t == "none")
            continue;
        if (t == "csv")
            out.insert(OutputFormat::csv);
        else if (t == "json")
            out.insert(OutputFormat::json);
        else if (t == "svg")
            out.insert(OutputFormat::svg);
        else
            throw InvalidInput("unknown output format '" + t + "'");
    }
    return out;
}

inline const char *sweep_csv_header() { return "power_w,mu,k,detector,p_d,p_m,p_fa,n_trials,n_failures"; }

inline std::string point_to_csv_row(const PointResult &p)
{
    std::string row = format_double(p.power_w) + ",";
    if (p.detector == DetectorKind::TBD)
        row += format_double(p.mu);
    row += "," + std::to_string(p.k) + "," + to_string(p.detector) + "," + format_double(p.p_d) + "," +
           format_double(p.p_m) + "," + format_double(p.p_fa) + "," + std::to_string(p.n_trials) + "," +
           std::to_string(p.n_failures);
    return row;
}

inline std::string sweep_to_csv(const std::vector<PointResult> &points)
{
    std::string out = std::string(sweep_csv_header()) + "\n";
    for (const auto &p : points)
        out += point_to_csv_row(p) + "\n";
    return out;
}

/// Reads a sweep.csv back. n_h0 is not stored and comes back as 0.
inline std::vector<PointResult> parse_sweep_csv(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line) || trim(line) != sweep_csv_header())
        throw InvalidInput("sweep csv: unexpected header");
    std::vector<PointResult> out;
    int lineno = 1;
    while (std::getline(is, line))
    {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != 9)
            throw InvalidInput("sweep csv line " + std::to_string(lineno) + ": expected 9 fields");
        PointResult p;
        p.power_w = parse_double(f[0]);
        const std::string det = trim(f[3]);
        if (det == "TBD")
            p.detector = DetectorKind::TBD;
        else if (det == "EBD")
            p.detector = DetectorKind::EBD;
        else
            throw InvalidInput("sweep csv line " + std::to_string(lineno) + ": unknown detector '" + det + "'");
        p.mu = trim(f[1]).empty() ? std::numeric_limits<double>::quiet_NaN() : parse_double(f[1]);
        p.k = static_cast<int>(parse_integer(f[2]));
        p.p_d = parse_double(f[4]);
        p.p_m = parse_double(f[5]);
        p.p_fa = parse_double(f[6]);
        p.n_trials = static_cast<int>(parse_integer(f[7]));
        p.n_failures = static_cast<int>(parse_integer(f[8]));
        out.push_back(p);
    }
    return out;
}

inline nlohmann::ordered_json report_to_json(const SweepReport &r)
{
    using nlohmann::ordered_json;
    ordered_json j;
    j["format_version"] = r.format_version;
    j["config"] = r.config_echo;
    ordered_json pts = ordered_json::array();
    for (const auto &p : r.points)
    {
        ordered_json e;
        e["power_w"] = p.power_w;
        e["mu"] = p.detector == DetectorKind::TBD ? ordered_json(p.mu) : ordered_json(nullptr);
        e["k"] = p.k;
        e["detector"] = to_string(p.detector);
        e["p_d"] = p.p_d;
        e["p_m"] = p.p_m;
        e["p_fa"] = p.p_fa;
        e["n_trials"] = p.n_trials;
        e["n_h0"] = p.n_h0;
        e["n_failures"] = p.n_failures;
        pts.push_back(std::move(e));
    }
    j["points"] = std::move(pts);
    ordered_json cals = ordered_json::array();
    for (const auto &c : r.calibrations)
        cals.push_back({{"power_w", c.power_w},
                        {"k", c.k},
                        {"threshold", c.calibration.threshold},
                        {"target_pfa", c.calibration.target_pfa},
                        {"achieved_pfa", c.calibration.achieved_pfa},
                        {"trials_used", c.calibration.trials_used}});
    j["calibrations"] = std::move(cals);
    return j;
}

// ------------------------------------------------------------------------
// SVG

struct Series
{
    std::string label;
    std::vector<std::pair<double, double>> xy; // (power dBW, P_D)
};

inline std::string xml_escape(const std::string &s)
{
    std::string out;
    for (char c : s)
        switch (c)
        {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    return out;
}

/// Line plot of P_D against transmit power with a fixed [0, 1] y axis.
inline std::string render_pd_svg(const std::string &title, const std::vector<Series> &series)
{
    static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};
    const double W = 640, H = 420, left = 60, right = 170, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;

    double xmin = 0.0, xmax = 1.0;
    bool any = false;
    for (const auto &s : series)
        for (const auto &[x, y] : s.xy)
        {
            xmin = any ? std::min(xmin, x) : x;
            xmax = any ? std::max(xmax, x) : x;
            any = true;
        }
    if (!(xmax > xmin))
    {
        xmin -= 1.0;
        xmax += 1.0;
    }
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return top + (1.0 - y) * ph; };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(title)
      << "</text>\n";
    o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i)
    {
        const double y = i / 5.0;
        o << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << num(sy(y)) << "\" y2=\"" << num(sy(y))
          << "\" stroke=\"#ddd\"/>\n";
        o << "<text x=\"" << left - 6 << "\" y=\"" << num(sy(y) + 4) << "\" text-anchor=\"end\">" << num(y)
          << "</text>\n";
    }
    std::set<double> xticks;
    for (const auto &s : series)
        for (const auto &pt : s.xy)
            xticks.insert(pt.first);
    for (double x : xticks)
        o << "<text x=\"" << num(sx(x)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << num(x)
          << "</text>\n";
    o << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">transmit power [dBW]</text>\n";
    o << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << top + ph / 2 << ")\">P_D</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i)
    {
        const auto &s = series[i];
        const char *col = palette[i % std::size(palette)];
        std::string pts;
        for (const auto &[x, y] : s.xy)
            pts += num(sx(x)) + "," + num(sy(y)) + " ";
        o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"" << pts << "\"/>\n";
        for (const auto &[x, y] : s.xy)
            o << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"3\" fill=\"" << col << "\"/>\n";
        const double ly = top + 12 + 18.0 * static_cast<double>(i);
        o << "<line x1=\"" << left + pw + 12 << "\" x2=\"" << left + pw + 32 << "\" y1=\"" << ly - 4 << "\" y2=\""
          << ly - 4 << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << left + pw + 38 << "\" y=\"" << ly << "\">" << xml_escape(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

namespace detail
{
inline std::string series_label(const PointResult &p, bool by_k)
{
    if (p.detector == DetectorKind::EBD)
        return by_k ? "EBD K=" + std::to_string(p.k) : "EBD";
    return by_k ? "TBD K=" + std::to_string(p.k) + " mu=" + format_double(p.mu) : "TBD mu=" + format_double(p.mu);
}

/// Groups points into series; `k_filter` < 0 keeps every K.
inline std::vector<Series> build_series(const std::vector<PointResult> &points, bool by_k, int k_filter)
{
    std::vector<Series> out;
    std::map<std::string, std::size_t> index;
    for (const auto &p : points)
    {
        if (k_filter >= 0 && p.k != k_filter)
            continue;
        const std::string label = series_label(p, by_k);
        auto it = index.find(label);
        if (it == index.end())
        {
            it = index.emplace(label, out.size()).first;
            out.push_back({label, {}});
        }
        out[it->second].xy.emplace_back(watts_to_dbw(p.power_w), p.p_d);
    }
    for (auto &s : out)
        std::sort(s.xy.begin(), s.xy.end());
    return out;
}
} // namespace detail

/// One figure per K (curves per detector and mu) plus one with every K when the grid has several.
inline std::vector<std::pair<std::string, std::string>> render_sweep_svgs(const std::vector<PointResult> &points)
{
    std::set<int> ks;
    for (const auto &p : points)
        ks.insert(p.k);
    std::vector<std::pair<std::string, std::string>> out;
    for (int k : ks)
        out.emplace_back("pd_vs_power_k" + std::to_string(k) + ".svg",
                         render_pd_svg("P_D vs power, K = " + std::to_string(k), detail::build_series(points, false, k)));
    if (ks.size() > 1)
        out.emplace_back("pd_vs_power_by_k.svg",
                         render_pd_svg("P_D vs power by K", detail::build_series(points, true, -1)));
    return out;
}

// ------------------------------------------------------------------------
// Files

inline void write_text_file(const std::filesystem::path &path, const std::string &text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open for writing", path.string());
    os << text;
    os.flush();
    if (!os)
        throw IoError("write failed", path.string());
}

inline void ensure_directory(const std::filesystem::path &dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw IoError("cannot create output directory", dir.string());
}

/// Writes the requested formats into out_dir and returns the files written.
inline std::vector<std::filesystem::path> emit_report(const SweepReport &r, const std::set<OutputFormat> &formats,
                                                      const std::filesystem::path &out_dir)
{
    std::vector<std::filesystem::path> written;
    if (formats.empty())
    {
        std::cerr << "warning: no output formats selected, nothing written\n";
        return written;
    }
    ensure_directory(out_dir);
    if (formats.count(OutputFormat::csv))
    {
        written.push_back(out_dir / "sweep.csv");
        write_text_file(written.back(), sweep_to_csv(r.points));
    }
    if (formats.count(OutputFormat::json))
    {
        written.push_back(out_dir / "sweep.json");
        write_text_file(written.back(), report_to_json(r).dump(2) + "\n");
    }
    if (formats.count(OutputFormat::svg))
        for (const auto &[name, svg] : render_sweep_svgs(r.points))
        {
            written.push_back(out_dir / name);
            write_text_file(written.back(), svg);
        }
    return written;
}

} // namespace debris
