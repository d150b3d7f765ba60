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
 * \file cpd.hpp
 * \brief Regularized ALS for CP decomposition and rank estimation.
 *
 * The solver minimizes
 *
 *   || Y - [[A,B,C]] ||_F^2 + mu (||A||_F^2 + ||B||_F^2 + ||C||_F^2)
 *
 * over factors with an overestimated column count. Each block update is the
 * exact ridge solution, e.g. A^T = (Z^H Z + mu I)^{-1} Z^H Y_(1)^T with
 * Z = C kr B, so the objective never increases. The Frobenius penalty
 * acts on each rank-1 term like a (norm)^{2/3} penalty once the three factor
 * columns balance, which drives surplus components to zero; the number of
 * surviving components is then read off the singular values of the factors.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace debris
{

enum class InitMethod
{
    gevd,
    random
};

struct AlsConfig
{
    int rank_max = 6;            ///< overestimated rank (number of factor columns)
    double mu = 0.08;            ///< ridge weight
    double epsilon = 1e-12;      ///< absolute residual tolerance ||[[A,B,C]] - Y||_F < epsilon
    int max_iterations = 200;    ///< full sweeps
    double rel_change_tol = 1e-6;
    InitMethod init = InitMethod::gevd;
    int restarts = 3;            ///< first restart uses init, the rest are random
    std::uint64_t seed = 0;

    void validate() const
    {
        if (rank_max < 1)
            throw InvalidInput("AlsConfig: rank_max must be >= 1");
        if (!(mu > 0.0) || !std::isfinite(mu))
            throw InvalidInput("AlsConfig: mu must be > 0");
        if (!(epsilon > 0.0))
            throw InvalidInput("AlsConfig: epsilon must be > 0");
        if (max_iterations < 1)
            throw InvalidInput("AlsConfig: max_iterations must be >= 1");
        if (!(rel_change_tol > 0.0))
            throw InvalidInput("AlsConfig: rel_change_tol must be > 0");
        if (restarts < 1)
            throw InvalidInput("AlsConfig: restarts must be >= 1");
    }
};

struct RankEstimate
{
    std::array<int, 3> per_factor_ranks{};
    int combined_rank = 0;
    std::array<std::vector<double>, 3> singular_values; // descending
    double threshold_rel = 0.0;
};

/// Called after every block update (mode 1, 2, 3) of every sweep.
using AlsObserver = std::function<void(int iteration, int mode, const FactorSet &)>;

// ------------------------------------------------------------------------
// Objective helpers

inline double factor_penalty(const FactorSet &fs)
{
    return fs.A.squaredNorm() + fs.B.squaredNorm() + fs.C.squaredNorm();
}

/// Regularized objective evaluated by explicit reconstruction.
inline double regularized_objective(const ComplexTensor3 &y, const FactorSet &fs, double mu)
{
    const ComplexTensor3 x = cp_reconstruct(fs);
    if (!(x.dims() == y.dims()))
        throw InvalidInput("regularized_objective: factor dims do not match tensor");
    return (y.data() - x.data()).squaredNorm() + mu * factor_penalty(fs);
}

namespace detail
{

inline void balance_columns(FactorSet &fs)
{
    for (Eigen::Index f = 0; f < fs.A.cols(); ++f)
    {
        const double na = fs.A.col(f).norm(), nb = fs.B.col(f).norm(), nc = fs.C.col(f).norm();
        if (na == 0.0 || nb == 0.0 || nc == 0.0)
        {
            fs.A.col(f).setZero();
            fs.B.col(f).setZero();
            fs.C.col(f).setZero();
            continue;
        }
        const double g = std::cbrt(na * nb * nc);
        fs.A.col(f) *= g / na;
        fs.B.col(f) *= g / nb;
        fs.C.col(f) *= g / nc;
    }
}

inline CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng &rng)
{
    CMatrix m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            m(r, c) = complex_normal(rng, 1.0);
    return m;
}

inline int numerical_rank(const Eigen::VectorXd &sv, double rel_tol)
{
    if (sv.size() == 0 || sv[0] <= 0.0)
        return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > rel_tol * sv[0])
            ++r;
    return r;
}

// Ridge block update: returns X with X^T = (G + mu I)^{-1} (Y_n conj(Z))^T, G = Z^H Z.
inline CMatrix ridge_update(const CMatrix &mttkrp, const CMatrix &gram, double mu)
{
    CMatrix reg = gram;
    reg.diagonal().array() += mu;
    Eigen::LLT<CMatrix> llt(reg);
    if (llt.info() != Eigen::Success)
        throw NumericalFailure("ridge normal equations not positive definite", -1);
    return llt.solve(mttkrp.transpose()).transpose();
}

} // namespace detail

/*!
 * Smallest magnitude ||a|| ||b|| ||c|| at which a rank-1 term can be a stable
 * stationary point of the ridge objective: (mu / 3)^{3/4}. Terms well below it
 * are still shrinking when ALS stops.
 */
inline double ridge_stability_floor(double mu) { return std::pow(mu / 3.0, 0.75); }

/// Zeroes components whose magnitude is under a tenth of the stability floor.
inline int prune_collapsed_components(FactorSet &fs, double mu)
{
    const double floor = 0.1 * ridge_stability_floor(mu);
    int pruned = 0;
    for (Eigen::Index f = 0; f < fs.A.cols(); ++f)
    {
        const double mag = fs.A.col(f).norm() * fs.B.col(f).norm() * fs.C.col(f).norm();
        if (mag < floor)
        {
            fs.A.col(f).setZero();
            fs.B.col(f).setZero();
            fs.C.col(f).setZero();
            pruned += mag > 0.0 ? 1 : 0;
        }
    }
    return pruned;
}

/// Random factors with balanced columns; component norms split ||Y||_F evenly.
inline FactorSet random_init(const ComplexTensor3 &y, int rank, Rng &rng)
{
    const auto [I, J, K] = y.dims();
    FactorSet fs;
    fs.A = detail::random_matrix(static_cast<Eigen::Index>(I), rank, rng);
    fs.B = detail::random_matrix(static_cast<Eigen::Index>(J), rank, rng);
    fs.C = detail::random_matrix(static_cast<Eigen::Index>(K), rank, rng);
    const double ynorm = frobenius_norm(y);
    const double target = std::cbrt(ynorm > 0.0 ? ynorm / rank : 1.0);
    for (CMatrix *m : {&fs.A, &fs.B, &fs.C})
        for (Eigen::Index f = 0; f < rank; ++f)
            m->col(f) *= target / m->col(f).norm();
    return fs;
}

/*!
 * GEVD initialization.
 *
 * Compresses the tensor onto the dominant left singular subspaces of the
 * mode-1 and mode-2 unfoldings, builds two pencil matrices from random
 * mixtures of the frontal slices, and takes the eigenvectors of
 * S1 S2^{-1} as the mode-1 factor. The remaining factors follow from a
 * rank-1 split of the least-squares solution for (C kr B)^T.
 *
 * If the data has numerical rank r below rank, the GEVD runs at r and the
 * remaining columns are filled with small random columns.
 *
 * Returns std::nullopt when the pencil is ill conditioned (eigenvalue gap
 * below 1e-10 relative); callers then fall back to random_init.
 */
inline std::optional<FactorSet> gevd_init(const ComplexTensor3 &y, int rank, Rng &rng)
{
    const auto [I, J, K] = y.dims();
    if (rank < 1)
        throw InvalidInput("gevd_init: rank must be >= 1");
    if (K < 2)
        throw InvalidInput("gevd_init: needs at least two frontal slices");
    if (std::min(I, J) < static_cast<std::size_t>(rank))
        throw InvalidInput("gevd_init: min(I, J) must be >= rank");

    const auto eI = static_cast<Eigen::Index>(I), eJ = static_cast<Eigen::Index>(J);
    const CMatrix y1 = unfold(y, 1);
    const CMatrix y2 = unfold(y, 2);
    Eigen::BDCSVD<CMatrix> svd1(y1, Eigen::ComputeThinU);
    Eigen::BDCSVD<CMatrix> svd2(y2, Eigen::ComputeThinU);
    const int r = std::min({rank, detail::numerical_rank(svd1.singularValues(), 1e-10),
                            detail::numerical_rank(svd2.singularValues(), 1e-10)});

    FactorSet fs;
    fs.A = CMatrix::Zero(eI, rank);
    fs.B = CMatrix::Zero(eJ, rank);
    fs.C = CMatrix::Zero(static_cast<Eigen::Index>(K), rank);
    if (r == 0)
        return fs;

    const CMatrix U = svd1.matrixU().leftCols(r);
    const CMatrix Vc = svd2.matrixU().leftCols(r).conjugate();

    CMatrix s1 = CMatrix::Zero(r, r), s2 = CMatrix::Zero(r, r);
    for (std::size_t k = 0; k < K; ++k)
    {
        const CMatrix compressed = U.adjoint() * y.slice(k) * Vc;
        s1 += complex_normal(rng, 1.0) * compressed;
        s2 += complex_normal(rng, 1.0) * compressed;
    }

    Eigen::JacobiSVD<CMatrix> s2svd(s2);
    const auto &s2sv = s2svd.singularValues();
    if (!(s2sv[r - 1] > 1e-12 * s2sv[0]))
        return std::nullopt;

    // S1 S2^{-1} = (S2^{-T} S1^T)^T
    const CMatrix pencil = s2.transpose().partialPivLu().solve(s1.transpose()).transpose();
    Eigen::ComplexEigenSolver<CMatrix> eig(pencil);
    if (eig.info() != Eigen::Success || !eig.eigenvalues().allFinite())
        return std::nullopt;

    const CVector &lambda = eig.eigenvalues();
    const double scale = lambda.cwiseAbs().maxCoeff();
    for (Eigen::Index p = 0; p < r; ++p)
        for (Eigen::Index q = p + 1; q < r; ++q)
            if (std::abs(lambda[p] - lambda[q]) < 1e-10 * scale)
                return std::nullopt;

    const CMatrix a = U * eig.eigenvectors();
    // rows of W approximate (b_f kron c_f)^T laid out as mode-1 columns j + k*J
    const CMatrix w = a.colPivHouseholderQr().solve(y1);
    for (Eigen::Index f = 0; f < r; ++f)
    {
        CVector row = w.row(f).transpose();
        Eigen::Map<const CMatrix> bc(row.data(), eJ, static_cast<Eigen::Index>(K));
        Eigen::JacobiSVD<CMatrix> split(bc, Eigen::ComputeThinU | Eigen::ComputeThinV);
        fs.A.col(f) = a.col(f);
        fs.B.col(f) = split.singularValues()[0] * split.matrixU().col(0);
        fs.C.col(f) = split.matrixV().col(0).conjugate();
    }
    detail::balance_columns(fs);
    if (!fs.A.allFinite() || !fs.B.allFinite() || !fs.C.allFinite())
        return std::nullopt;

    if (r < rank)
    {
        double g = 0.0;
        for (Eigen::Index f = 0; f < r; ++f)
            g += fs.A.col(f).norm() / r;
        const double pad = 1e-6 * (g > 0.0 ? g : 1.0);
        for (CMatrix *m : {&fs.A, &fs.B, &fs.C})
        {
            CMatrix extra = detail::random_matrix(m->rows(), rank - r, rng);
            for (Eigen::Index f = 0; f < extra.cols(); ++f)
                extra.col(f) *= pad / extra.col(f).norm();
            m->rightCols(rank - r) = extra;
        }
    }
    return fs;
}

/*!
 * Regularized ALS from a given starting point. Stops when the residual drops
 * below cfg.epsilon, when the relative change of the objective over one sweep
 * drops below cfg.rel_change_tol, or after cfg.max_iterations sweeps.
 */
inline FactorSet als_cpd(const ComplexTensor3 &y, const AlsConfig &cfg, FactorSet init,
                         const AlsObserver &observer = {})
{
    cfg.validate();
    const auto [I, J, K] = y.dims();
    const auto F = static_cast<std::size_t>(cfg.rank_max);
    if (F > std::min({J * K, I * K, I * J}))
        throw InvalidInput("als_cpd: rank_max exceeds the column count of an unfolding");
    if (!y.data().allFinite())
        throw InvalidInput("als_cpd: tensor has non-finite entries");
    init.validate();
    if (!(init.dims() == y.dims()) || init.rank() != cfg.rank_max)
        throw InvalidInput("als_cpd: initial factors do not match tensor dims / rank");

    FactorSet fs = std::move(init);
    fs.mu = cfg.mu;

    const CMatrix y1 = unfold(y, 1);
    const CMatrix y2 = unfold(y, 2);
    const Eigen::Map<const CMatrix> y3t(y.data().data(), static_cast<Eigen::Index>(I * J),
                                        static_cast<Eigen::Index>(K));
    const double ynorm2 = squared_norm(y);

    double prev = std::numeric_limits<double>::infinity();
    int it = 0;
    while (it < cfg.max_iterations)
    {
        ++it;
        CMatrix gb = fs.B.adjoint() * fs.B;
        CMatrix gc = fs.C.adjoint() * fs.C;
        fs.A = detail::ridge_update(y1 * khatri_rao(fs.C, fs.B).conjugate(), gc.cwiseProduct(gb), cfg.mu);
        if (observer)
            observer(it, 1, fs);

        CMatrix ga = fs.A.adjoint() * fs.A;
        fs.B = detail::ridge_update(y2 * khatri_rao(fs.C, fs.A).conjugate(), gc.cwiseProduct(ga), cfg.mu);
        if (observer)
            observer(it, 2, fs);

        gb = fs.B.adjoint() * fs.B;
        const CMatrix m3 = y3t.transpose() * khatri_rao(fs.B, fs.A).conjugate();
        fs.C = detail::ridge_update(m3, gb.cwiseProduct(ga), cfg.mu);
        if (observer)
            observer(it, 3, fs);

        // <Y, X> = sum conj(C) .* M3, ||X||^2 = sum (A^H A .* B^H B .* C^H C)
        gc = fs.C.adjoint() * fs.C;
        const double inner = fs.C.conjugate().cwiseProduct(m3).sum().real();
        const double xnorm2 = ga.cwiseProduct(gb).cwiseProduct(gc).sum().real();
        const double resid2 = std::max(0.0, ynorm2 - 2.0 * inner + xnorm2);
        const double obj = resid2 + cfg.mu * factor_penalty(fs);
        if (!std::isfinite(obj))
            throw NumericalFailure("als_cpd: non-finite objective", it);

        if (std::sqrt(resid2) < cfg.epsilon)
            break;
        if (std::isfinite(prev))
        {
            const double denom = std::max(std::abs(prev), std::numeric_limits<double>::min());
            if (std::abs(prev - obj) <= cfg.rel_change_tol * denom)
                break;
        }
        prev = obj;
    }

    prune_collapsed_components(fs, cfg.mu);
    fs.iterations_used = it;
    fs.final_residual = (y.data() - cp_reconstruct(fs).data()).norm();
    return fs;
}

/// ALS with the initialization selected by cfg.init (GEVD falls back to random).
inline FactorSet als_cpd(const ComplexTensor3 &y, const AlsConfig &cfg, const AlsObserver &observer = {})
{
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, {0}));
    std::optional<FactorSet> init;
    const auto [I, J, K] = y.dims();
    if (cfg.init == InitMethod::gevd && K >= 2 && std::min(I, J) >= static_cast<std::size_t>(cfg.rank_max))
        init = gevd_init(y, cfg.rank_max, rng);
    if (!init)
        init = random_init(y, cfg.rank_max, rng);
    return als_cpd(y, cfg, std::move(*init), observer);
}

/*!
 * Per-factor rank = number of singular values above threshold_rel * sigma_1
 * (0 when sigma_1 = 0). The combined rank is the median of the three,
 * ties going to the larger value.
 */
inline RankEstimate estimate_rank(const FactorSet &fs, double threshold_rel)
{
    if (!(threshold_rel > 0.0 && threshold_rel < 1.0))
        throw InvalidInput("estimate_rank: threshold_rel must lie in (0, 1)");
    fs.validate();
    RankEstimate est;
    est.threshold_rel = threshold_rel;
    const std::array<const CMatrix *, 3> factors{&fs.A, &fs.B, &fs.C};
    for (std::size_t n = 0; n < 3; ++n)
    {
        if (!factors[n]->allFinite())
            throw InvalidInput("estimate_rank: non-finite factor");
        Eigen::JacobiSVD<CMatrix> svd(*factors[n]);
        const Eigen::VectorXd &sv = svd.singularValues();
        est.singular_values[n].assign(sv.data(), sv.data() + sv.size());
        int r = 0;
        if (sv.size() > 0 && sv[0] > 0.0)
            for (Eigen::Index i = 0; i < sv.size(); ++i)
                r += sv[i] > threshold_rel * sv[0] ? 1 : 0;
        est.per_factor_ranks[n] = r;
    }
    std::array<int, 3> sorted = est.per_factor_ranks;
    std::sort(sorted.begin(), sorted.end());
    est.combined_rank = sorted[1];
    return est;
}

struct PathEstimate
{
    FactorSet factors;     ///< best factor set over all restarts
    double objective = 0.0;
    RankEstimate rank;
    int restarts_run = 0;
};

/// Runs cfg.restarts solves (configured init first, then random), keeps the lowest objective.
inline PathEstimate estimate_paths_detailed(const ComplexTensor3 &y, const AlsConfig &cfg, double threshold_rel)
{
    cfg.validate();
    PathEstimate best;
    best.objective = std::numeric_limits<double>::infinity();
    for (int r = 0; r < cfg.restarts; ++r)
    {
        AlsConfig run = cfg;
        run.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(r)});
        if (r > 0)
            run.init = InitMethod::random;
        FactorSet fs = als_cpd(y, run);
        const double obj = fs.final_residual * fs.final_residual + cfg.mu * factor_penalty(fs);
        if (obj < best.objective)
        {
            best.objective = obj;
            best.factors = std::move(fs);
        }
    }
    best.restarts_run = cfg.restarts;
    best.rank = estimate_rank(best.factors, threshold_rel);
    return best;
}

inline int estimate_paths(const ComplexTensor3 &y, const AlsConfig &cfg, double threshold_rel)
{
    return estimate_paths_detailed(y, cfg, threshold_rel).rank.combined_rank;
}

} // namespace debris
