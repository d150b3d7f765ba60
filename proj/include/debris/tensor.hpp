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
 * \file tensor.hpp
 * \brief Dense complex third-order tensors and the CP algebra built on them.
 *
 * Storage is column-major with the first index fastest: entry (i,j,k) lives at
 * i + j*I + k*I*J. Unfoldings follow the cyclic convention
 *
 *   X_(1)(i, j + k*J) = X(i,j,k)    (I x JK)
 *   X_(2)(j, i + k*I) = X(i,j,k)    (J x IK)
 *   X_(3)(k, i + j*I) = X(i,j,k)    (K x IJ)
 *
 * so that for X = [[A,B,C]]:  X_(1) = A (C kr B)^T,  X_(2) = B (C kr A)^T,
 * X_(3) = C (B kr A)^T, where kr is the Khatri-Rao product below.
 * Code indices are 0-based.
 */

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"

namespace debris
{

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct Dims3
{
    std::size_t I = 0, J = 0, K = 0;

    std::size_t size() const noexcept { return I * J * K; }
    friend bool operator==(const Dims3 &, const Dims3 &) = default;
};

class ComplexTensor3
{
public:
    ComplexTensor3() = default;

    // Zero tensor.
    explicit ComplexTensor3(Dims3 dims) : dims_(dims), data_(CVector::Zero(static_cast<Eigen::Index>(dims.size())))
    {
        check_dims(dims);
    }

    ComplexTensor3(std::size_t I, std::size_t J, std::size_t K) : ComplexTensor3(Dims3{I, J, K}) {}

    // Takes ownership of data laid out i-fastest; rejects size mismatch and non-finite entries.
    ComplexTensor3(Dims3 dims, CVector data) : dims_(dims), data_(std::move(data))
    {
        check_dims(dims);
        if (static_cast<std::size_t>(data_.size()) != dims.size())
            throw InvalidInput("ComplexTensor3: data length " + std::to_string(data_.size()) +
                               " does not match dims product " + std::to_string(dims.size()));
        if (!data_.allFinite())
            throw InvalidInput("ComplexTensor3: non-finite entry");
    }

    const Dims3 &dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return dims_.size(); }

    Complex &operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[index(i, j, k)]; }
    const Complex &operator()(std::size_t i, std::size_t j, std::size_t k) const { return data_[index(i, j, k)]; }

    const CVector &data() const noexcept { return data_; }
    CVector &data() noexcept { return data_; }

    // Frontal slice X(:,:,k) as an I x J matrix view.
    Eigen::Map<const CMatrix> slice(std::size_t k) const
    {
        return {data_.data() + static_cast<Eigen::Index>(k * dims_.I * dims_.J), static_cast<Eigen::Index>(dims_.I),
                static_cast<Eigen::Index>(dims_.J)};
    }
    Eigen::Map<CMatrix> slice(std::size_t k)
    {
        return {data_.data() + static_cast<Eigen::Index>(k * dims_.I * dims_.J), static_cast<Eigen::Index>(dims_.I),
                static_cast<Eigen::Index>(dims_.J)};
    }

    ComplexTensor3 &operator+=(const ComplexTensor3 &other)
    {
        if (!(other.dims_ == dims_))
            throw InvalidInput("ComplexTensor3: dimension mismatch in +=");
        data_ += other.data_;
        return *this;
    }

    ComplexTensor3 &operator*=(Complex s)
    {
        data_ *= s;
        return *this;
    }

    friend ComplexTensor3 operator*(Complex s, ComplexTensor3 x) { return x *= s; }

private:
    static void check_dims(const Dims3 &d)
    {
        if (d.I == 0 || d.J == 0 || d.K == 0)
            throw InvalidInput("ComplexTensor3: dimensions must be positive");
    }

    Eigen::Index index(std::size_t i, std::size_t j, std::size_t k) const noexcept
    {
        return static_cast<Eigen::Index>(i + dims_.I * (j + dims_.J * k));
    }

    Dims3 dims_{};
    CVector data_{};
};

/// CP factor matrices plus the bookkeeping of the solve that produced them.
struct FactorSet
{
    CMatrix A; // I x F
    CMatrix B; // J x F
    CMatrix C; // K x F
    double mu = 0.0;
    int iterations_used = 0;
    double final_residual = 0.0;

    Eigen::Index rank() const noexcept { return A.cols(); }
    Dims3 dims() const noexcept
    {
        return {static_cast<std::size_t>(A.rows()), static_cast<std::size_t>(B.rows()),
                static_cast<std::size_t>(C.rows())};
    }

    void validate() const
    {
        if (A.cols() != B.cols() || A.cols() != C.cols())
            throw InvalidInput("FactorSet: factor column counts differ");
        if (A.rows() == 0 || B.rows() == 0 || C.rows() == 0)
            throw InvalidInput("FactorSet: empty factor matrix");
        if (final_residual < 0.0)
            throw InvalidInput("FactorSet: negative residual");
    }
};

// ------------------------------------------------------------------------
// Unfolding

inline void check_mode(int mode)
{
    if (mode < 1 || mode > 3)
        throw InvalidInput("mode must be 1, 2 or 3, got " + std::to_string(mode));
}

inline CMatrix unfold(const ComplexTensor3 &x, int mode)
{
    check_mode(mode);
    const auto [I, J, K] = x.dims();
    const auto &d = x.data();
    const auto eI = static_cast<Eigen::Index>(I), eJ = static_cast<Eigen::Index>(J), eK = static_cast<Eigen::Index>(K);
    switch (mode)
    {
    case 1:
        return Eigen::Map<const CMatrix>(d.data(), eI, eJ * eK);
    case 3:
        return Eigen::Map<const CMatrix>(d.data(), eI * eJ, eK).transpose();
    default:
        break;
    }
    CMatrix out(eJ, eI * eK);
    for (Eigen::Index k = 0; k < eK; ++k)
        out.middleCols(k * eI, eI) = x.slice(static_cast<std::size_t>(k)).transpose();
    return out;
}

inline ComplexTensor3 fold(const CMatrix &m, int mode, Dims3 dims)
{
    check_mode(mode);
    if (dims.size() == 0)
        throw InvalidInput("fold: dimensions must be positive");
    const auto eI = static_cast<Eigen::Index>(dims.I), eJ = static_cast<Eigen::Index>(dims.J),
               eK = static_cast<Eigen::Index>(dims.K);
    const std::array<std::pair<Eigen::Index, Eigen::Index>, 3> want{
        {{eI, eJ * eK}, {eJ, eI * eK}, {eK, eI * eJ}}};
    const auto [rows, cols] = want[static_cast<std::size_t>(mode - 1)];
    if (m.rows() != rows || m.cols() != cols)
        throw InvalidInput("fold: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                           ", mode " + std::to_string(mode) + " needs " + std::to_string(rows) + "x" +
                           std::to_string(cols));

    CVector data(static_cast<Eigen::Index>(dims.size()));
    switch (mode)
    {
    case 1:
        data = Eigen::Map<const CVector>(m.data(), m.size());
        break;
    case 2:
        for (Eigen::Index k = 0; k < eK; ++k)
            Eigen::Map<CMatrix>(data.data() + k * eI * eJ, eI, eJ) = m.middleCols(k * eI, eI).transpose();
        break;
    case 3:
        Eigen::Map<CMatrix>(data.data(), eI * eJ, eK) = m.transpose();
        break;
    }
    return ComplexTensor3(dims, std::move(data));
}

// ------------------------------------------------------------------------
// Products and reconstruction

/// Columnwise Kronecker product: column f is kron(p_f, q_f), row index p*n + q.
inline CMatrix khatri_rao(const CMatrix &p, const CMatrix &q)
{
    if (p.cols() != q.cols())
        throw InvalidInput("khatri_rao: column counts differ (" + std::to_string(p.cols()) + " vs " +
                           std::to_string(q.cols()) + ")");
    const Eigen::Index m = p.rows(), n = q.rows();
    CMatrix out(m * n, p.cols());
    for (Eigen::Index f = 0; f < p.cols(); ++f)
        for (Eigen::Index r = 0; r < m; ++r)
            out.col(f).segment(r * n, n) = p(r, f) * q.col(f);
    return out;
}

/// X(i,j,k) = sum_f A(i,f) B(j,f) C(k,f).
inline ComplexTensor3 cp_reconstruct(const FactorSet &fs)
{
    fs.validate();
    const Dims3 dims = fs.dims();
    CMatrix x1 = fs.A * khatri_rao(fs.C, fs.B).transpose();
    return ComplexTensor3(dims, Eigen::Map<const CVector>(x1.data(), x1.size()));
}

inline double frobenius_norm(const ComplexTensor3 &x) { return x.data().norm(); }

inline double squared_norm(const ComplexTensor3 &x) { return x.data().squaredNorm(); }

} // namespace debris
