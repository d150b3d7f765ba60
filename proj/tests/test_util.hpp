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

// Independent reference implementations shared by the unit and acceptance tests.
// Everything here works from explicit index loops, never from the library's
// unfold/khatri_rao/cp_reconstruct.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include <debris/tensor.hpp>

namespace oracle
{

using debris::CMatrix;
using debris::Complex;
using debris::ComplexTensor3;
using debris::Dims3;

inline Complex randc(std::mt19937_64 &g)
{
    std::normal_distribution<double> n(0.0, 1.0);
    const double re = n(g);
    return {re, n(g)};
}

inline CMatrix random_cmatrix(Eigen::Index r, Eigen::Index c, std::mt19937_64 &g)
{
    CMatrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i)
            m(i, j) = randc(g);
    return m;
}

inline ComplexTensor3 random_tensor(const Dims3 &d, std::mt19937_64 &g)
{
    ComplexTensor3 x(d);
    for (std::size_t k = 0; k < d.K; ++k)
        for (std::size_t j = 0; j < d.J; ++j)
            for (std::size_t i = 0; i < d.I; ++i)
                x(i, j, k) = randc(g);
    return x;
}

/// Matricization written out from the index definitions.
inline CMatrix unfold(const ComplexTensor3 &x, int mode)
{
    const auto [I, J, K] = x.dims();
    const auto ii = static_cast<Eigen::Index>(I), jj = static_cast<Eigen::Index>(J), kk = static_cast<Eigen::Index>(K);
    CMatrix m = mode == 1 ? CMatrix(ii, jj * kk) : mode == 2 ? CMatrix(jj, ii * kk) : CMatrix(kk, ii * jj);
    for (Eigen::Index k = 0; k < kk; ++k)
        for (Eigen::Index j = 0; j < jj; ++j)
            for (Eigen::Index i = 0; i < ii; ++i)
            {
                const Complex v = x(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(k));
                if (mode == 1)
                    m(i, j + k * jj) = v;
                else if (mode == 2)
                    m(j, i + k * ii) = v;
                else
                    m(k, i + j * ii) = v;
            }
    return m;
}

/// Column-wise Kronecker product by double loop.
inline CMatrix khatri_rao(const CMatrix &p, const CMatrix &q)
{
    CMatrix out(p.rows() * q.rows(), p.cols());
    for (Eigen::Index f = 0; f < p.cols(); ++f)
        for (Eigen::Index a = 0; a < p.rows(); ++a)
            for (Eigen::Index b = 0; b < q.rows(); ++b)
                out(a * q.rows() + b, f) = p(a, f) * q(b, f);
    return out;
}

/// X(i,j,k) = sum_f A(i,f) B(j,f) C(k,f).
inline ComplexTensor3 triple_sum(const CMatrix &a, const CMatrix &b, const CMatrix &c)
{
    ComplexTensor3 x(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(b.rows()),
                     static_cast<std::size_t>(c.rows()));
    for (Eigen::Index k = 0; k < c.rows(); ++k)
        for (Eigen::Index j = 0; j < b.rows(); ++j)
            for (Eigen::Index i = 0; i < a.rows(); ++i)
            {
                Complex s = 0.0;
                for (Eigen::Index f = 0; f < a.cols(); ++f)
                    s += a(i, f) * b(j, f) * c(k, f);
                x(static_cast<std::size_t>(i), static_cast<std::size_t>(j), static_cast<std::size_t>(k)) = s;
            }
    return x;
}

inline double max_abs_diff(const ComplexTensor3 &x, const ComplexTensor3 &y)
{
    double m = 0.0;
    for (Eigen::Index n = 0; n < x.data().size(); ++n)
        m = std::max(m, std::abs(x.data()(n) - y.data()(n)));
    return m;
}

inline double rel_error(const ComplexTensor3 &x, const ComplexTensor3 &ref)
{
    const double den = ref.data().norm();
    const double num = (x.data() - ref.data()).norm();
    return den > 0.0 ? num / den : num;
}

/// Matrix with orthonormal-ish columns scaled so that cond <= 10 (singular values in [1, 10]).
inline CMatrix conditioned_factor(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &g, double smax = 10.0)
{
    Eigen::HouseholderQR<CMatrix> qr(random_cmatrix(rows, rows, g));
    CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
    Eigen::HouseholderQR<CMatrix> qr2(random_cmatrix(cols, cols, g));
    CMatrix v = qr2.householderQ();
    std::uniform_real_distribution<double> u(1.0, smax);
    Eigen::VectorXd s(cols);
    for (Eigen::Index i = 0; i < cols; ++i)
        s(i) = u(g);
    s(0) = 1.0;
    if (cols > 1)
        s(cols - 1) = smax;
    return q * s.cast<Complex>().asDiagonal() * v.adjoint();
}

} // namespace oracle

namespace oracle
{

/// Rank-L CP factors of the given dims; every factor has condition number <= 10
/// and every component magnitude ||a|| ||b|| ||c|| is at least `scale`.
inline debris::FactorSet conditioned_cp(const Dims3 &d, int L, std::mt19937_64 &g, double scale = 10.0)
{
    debris::FactorSet fs;
    fs.A = scale * conditioned_factor(static_cast<Eigen::Index>(d.I), L, g);
    fs.B = conditioned_factor(static_cast<Eigen::Index>(d.J), L, g);
    fs.C = conditioned_factor(static_cast<Eigen::Index>(d.K), L, g);
    return fs;
}

/// Column cosine |<x, y>| / (||x|| ||y||).
inline double cosine(const debris::CVector &x, const debris::CVector &y)
{
    return std::abs(x.dot(y)) / (x.norm() * y.norm());
}

} // namespace oracle
