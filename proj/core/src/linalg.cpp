// SPDX-License-Identifier: Apache-2.0
//
// cfsat: energy-efficiency toolkit for satellite-assisted UAV cell-free networks
// Copyright (C) 2026 The cfsat Authors
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

#include "cfsat/linalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace cfsat {

namespace {

template <typename MatrixT>
MatrixT factor_impl(const MatrixT& A, double rel_tol) {
    if (A.rows() != A.cols()) throw std::invalid_argument("psd_factor: matrix is not square");
    const Eigen::Index n = A.rows();
    if (n == 0) return MatrixT(0, 0);
    const MatrixT H = (A + A.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<MatrixT> eig(H);
    if (eig.info() != Eigen::Success) throw std::runtime_error("psd_factor: eigensolver failed");
    const Vec& lambda = eig.eigenvalues();
    const double trace = std::max(0.0, std::abs(std::real(H.trace())));
    const double floor = -rel_tol * trace;
    Vec root(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (lambda(i) < floor) {
            throw std::domain_error("psd_factor: matrix is indefinite (eigenvalue " +
                                    std::to_string(lambda(i)) + ", trace " +
                                    std::to_string(trace) + ")");
        }
        root(i) = std::sqrt(std::max(0.0, lambda(i)));
    }
    return eig.eigenvectors() * root.asDiagonal();
}

} // namespace

CMat psd_factor(const CMat& A, double rel_tol) { return factor_impl(A, rel_tol); }

Mat psd_factor(const Mat& A, double rel_tol) { return factor_impl(A, rel_tol); }

double min_eigenvalue(const CMat& A) {
    if (A.size() == 0) return 0.0;
    const CMat H = (A + A.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMat> eig(H, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

double relative_frobenius(const CMat& A, const CMat& B) {
    const double denom = std::max(B.norm(), 1e-300);
    return (A - B).norm() / denom;
}

} // namespace cfsat
