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

// CT3 text format:
//   line 1:  CT3 I J K
//   then I*J*K lines "re im", i fastest, then j, then k.
// Numbers are written in shortest round-trip form.

#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "tensor.hpp"

namespace debris
{

inline std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw InvalidInput("not a number: '" + std::string(s) + "'");
    return v;
}

inline void write_ct3(std::ostream &os, const ComplexTensor3 &x)
{
    const auto [I, J, K] = x.dims();
    os << "CT3 " << I << ' ' << J << ' ' << K << '\n';
    for (const Complex &z : x.data())
        os << format_double(z.real()) << ' ' << format_double(z.imag()) << '\n';
}

inline ComplexTensor3 read_ct3(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line))
        throw InvalidInput("CT3: empty input");
    std::istringstream head(line);
    std::string magic;
    long long I = 0, J = 0, K = 0;
    if (!(head >> magic >> I >> J >> K) || magic != "CT3" || I <= 0 || J <= 0 || K <= 0)
        throw InvalidInput("CT3: bad header '" + line + "'");
    std::string rest;
    if (head >> rest)
        throw InvalidInput("CT3: trailing tokens in header");

    const Dims3 dims{static_cast<std::size_t>(I), static_cast<std::size_t>(J), static_cast<std::size_t>(K)};
    CVector data(static_cast<Eigen::Index>(dims.size()));
    for (Eigen::Index n = 0; n < data.size(); ++n)
    {
        if (!std::getline(is, line))
            throw InvalidInput("CT3: expected " + std::to_string(data.size()) + " entries, got " + std::to_string(n));
        const auto sep = line.find_first_of(" \t");
        if (sep == std::string::npos)
            throw InvalidInput("CT3: line " + std::to_string(n + 2) + " needs 're im'");
        data[n] = Complex(parse_double(std::string_view(line).substr(0, sep)),
                          parse_double(std::string_view(line).substr(sep + 1)));
    }
    while (std::getline(is, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos)
            throw InvalidInput("CT3: trailing data after last entry");
    return ComplexTensor3(dims, std::move(data));
}

inline void save_ct3(const std::string &path, const ComplexTensor3 &x)
{
    std::ofstream os(path);
    if (!os)
        throw IoError("cannot open for writing", path);
    write_ct3(os, x);
    if (!os)
        throw IoError("write failed", path);
}

inline ComplexTensor3 load_ct3(const std::string &path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open for reading", path);
    return read_ct3(is);
}

} // namespace debris
