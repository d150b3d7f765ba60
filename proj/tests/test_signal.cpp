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

#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include <debris/channel.hpp>
#include <debris/signal.hpp>

#include "test_util.hpp"

using namespace debris;
using std::numbers::pi;

namespace
{

PathSet random_paths(int debris, std::uint64_t seed)
{
    GeometryConfig g;
    Rng rng(seed);
    g.debris_positions = sample_debris_positions(Vec3(1.0, 0.4, -0.4), Vec3(3.0, 2.0, 0.4), debris, rng);
    return build_path_set(g, rng);
}

double sigma_ratio(const CMatrix &m, int i)
{
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()[i] / svd.singularValues()[0];
}

} // namespace

TEST_CASE("Signal - probes")
{
    ProbeConfig cfg;
    cfg.transmit_power = 3.0;
    Rng r1(51), r2(51);
    const ProbeMatrices a = generate_probes(cfg, r1);
    const ProbeMatrices b = generate_probes(cfg, r2);
    CHECK(a.P == b.P);
    CHECK(a.Q == b.Q);

    CHECK(a.P.rows() == cfg.n_tx);
    CHECK(a.P.cols() == cfg.frames);
    CHECK(a.Q.rows() == cfg.n_rx);
    CHECK(a.Q.cols() == cfg.subframes);
    const double amp = probe_amplitude(cfg);
    for (Eigen::Index n = 0; n < a.P.size(); ++n)
        REQUIRE(std::abs(std::abs(a.P(n)) / amp - 1.0) < 1e-14);
    for (Eigen::Index n = 0; n < a.Q.size(); ++n)
        REQUIRE(std::abs(std::abs(a.Q(n)) - 1.0) < 1e-14);
    for (Eigen::Index t = 0; t < a.P.cols(); ++t)
        REQUIRE(a.P.col(t).squaredNorm() == Catch::Approx(cfg.transmit_power / cfg.total_subcarriers).epsilon(1e-12));

    // phases do not depend on the power
    ProbeConfig low = cfg;
    low.transmit_power = 0.01;
    Rng r3(51);
    const ProbeMatrices c = generate_probes(low, r3);
    CHECK((c.P / probe_amplitude(low) - a.P / amp).norm() < 1e-12);
}

TEST_CASE("Signal - training subcarriers")
{
    CHECK(training_subcarrier_indices(6, 128) == std::vector<int>{1, 22, 43, 64, 85, 106});
    CHECK(training_subcarrier_indices(1, 128) == std::vector<int>{1});
    CHECK(training_subcarrier_indices(128, 128).back() == 128);
    CHECK_THROWS_AS(training_subcarrier_indices(0, 128), InvalidInput);
    CHECK_THROWS_AS(training_subcarrier_indices(129, 128), InvalidInput);
}

TEST_CASE("Signal - delay signature")
{
    CHECK(delay_signature(0.0, 2e9, 6, 128) == CVector::Ones(6));
    const double tau = 128.0 / 2e9;
    CHECK(std::abs(delay_signature(tau, 2e9, 6, 128)[0] - Complex(1.0, 0.0)) < 1e-12);

    std::mt19937_64 g(52);
    std::uniform_real_distribution<double> u(0.0, 1e-6);
    for (int t = 0; t < 100; ++t)
    {
        const double tt = u(g);
        const CVector s = delay_signature(tt, 2e9, 12, 128);
        for (int k = 1; k <= 12; ++k)
        {
            const double ph = -2.0 * pi * std::fmod(tt * 2e9 * k / 128.0, 1.0);
            REQUIRE(std::abs(s[k - 1] - Complex(std::cos(ph), std::sin(ph))) <= 1e-15);
        }
    }
}

TEST_CASE("Signal - noiseless LOS tensor is rank one")
{
    ProbeConfig cfg;
    Rng rng(53);
    const PathSet ps = random_paths(0, 54);
    const ProbeMatrices pm = generate_probes(cfg, rng);
    const ComplexTensor3 y = build_received_tensor(ps, pm, cfg, 2e9, 0.0, rng);
    for (int m = 1; m <= 3; ++m)
        CHECK(sigma_ratio(unfold(y, m), 1) < 1e-10);
}

TEST_CASE("Signal - noiseless tensor has rank L")
{
    ProbeConfig cfg;
    for (int debris = 1; debris <= 3; ++debris)
    {
        Rng rng(55 + static_cast<std::uint64_t>(debris));
        const PathSet ps = random_paths(debris, 60 + static_cast<std::uint64_t>(debris));
        const ProbeMatrices pm = generate_probes(cfg, rng);
        const ComplexTensor3 y = build_received_tensor(ps, pm, cfg, 2e9, 0.0, rng);
        const int L = debris + 1;
        for (int m = 1; m <= 3; ++m)
        {
            if (m == 3 && L > cfg.training_subcarriers)
                continue;
            INFO("L = " << L << ", mode " << m);
            CHECK(sigma_ratio(unfold(y, m), L - 1) > 1e-12);
            CHECK(sigma_ratio(unfold(y, m), L) < 1e-10);
        }
    }
}

TEST_CASE("Signal - slice-wise and CP constructions agree")
{
    ProbeConfig cfg;
    GeometryConfig geom;
    for (int t = 0; t < 10; ++t)
    {
        Rng g(70 + static_cast<std::uint64_t>(t));
        geom.debris_positions = sample_debris_positions(Vec3(1.0, 0.4, -0.4), Vec3(3.0, 2.0, 0.4), t % 4, g);
        const PathSet ps = build_path_set(geom, g);
        const ProbeMatrices pm = generate_probes(cfg, g);
        Rng n1(5), n2(5);
        const ComplexTensor3 cp = build_received_tensor(ps, pm, cfg, geom.sampling_rate, 0.0, n1);
        const ComplexTensor3 sw = build_received_tensor_slicewise(ps, pm, cfg, geom, 0.0, n2);
        REQUIRE(oracle::max_abs_diff(cp, sw) <= 1e-10 * cp.data().cwiseAbs().maxCoeff());

        // identical noise draws on both routes
        Rng m1(6), m2(6);
        const ComplexTensor3 cpn = build_received_tensor(ps, pm, cfg, geom.sampling_rate, 1e-14, m1);
        const ComplexTensor3 swn = build_received_tensor_slicewise(ps, pm, cfg, geom, 1e-14, m2);
        REQUIRE(oracle::max_abs_diff(cpn, swn) <= 1e-10 * cpn.data().cwiseAbs().maxCoeff());
    }
}

TEST_CASE("Signal - noise moments")
{
    ProbeConfig cfg;
    cfg.transmit_power = 1e-30;
    cfg.subframes = 50;
    cfg.frames = 50;
    cfg.training_subcarriers = 40; // 1e5 entries
    Rng rng(80);
    const PathSet ps = random_paths(1, 81);
    const ProbeMatrices pm = generate_probes(cfg, rng);
    const double var = 2.5e-12;
    const ComplexTensor3 y = build_received_tensor(ps, pm, cfg, 2e9, var, rng);
    const double n = static_cast<double>(y.data().size());
    const Complex mean = y.data().sum() / n;
    const double v = (y.data().array() - mean).abs2().sum() / n;
    CHECK(std::abs(mean) < 0.02 * std::sqrt(var));
    CHECK(v == Catch::Approx(var).epsilon(0.05));
}

TEST_CASE("Signal - doubling the power doubles the energy")
{
    ProbeConfig cfg;
    const PathSet ps = random_paths(2, 90);
    Rng r1(91), r2(91);
    const ProbeMatrices a = generate_probes(cfg, r1);
    ProbeConfig twice = cfg;
    twice.transmit_power *= 2.0;
    const ProbeMatrices b = generate_probes(twice, r2);
    Rng z(0);
    const double e1 = squared_norm(build_received_tensor(ps, a, cfg, 2e9, 0.0, z));
    const double e2 = squared_norm(build_received_tensor(ps, b, twice, 2e9, 0.0, z));
    CHECK(e2 == Catch::Approx(2.0 * e1).epsilon(1e-12));
}

TEST_CASE("Signal - shape checks")
{
    ProbeConfig cfg;
    Rng rng(92);
    ProbeMatrices pm = generate_probes(cfg, rng);
    pm.P = pm.P.leftCols(3);
    CHECK_THROWS_AS(received_factors(random_paths(0, 1), pm, cfg, 2e9), InvalidInput);
    CHECK_THROWS_AS(add_noise(*std::make_unique<ComplexTensor3>(1, 1, 1), -1.0, rng), InvalidInput);
    ProbeConfig bad = cfg;
    bad.training_subcarriers = 200;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
}
