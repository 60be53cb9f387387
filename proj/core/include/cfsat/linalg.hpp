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

#pragma once

#include "cfsat/common.hpp"

namespace cfsat {

/// Factor F with F F^H = A for a Hermitian PSD matrix A.
///
/// Eigenvalues in [-rel_tol * tr(A), 0) are clipped to zero; anything more
/// negative throws std::domain_error (the input is not PSD).
CMat psd_factor(const CMat& A, double rel_tol = 1e-10);

/// Real counterpart of psd_factor.
Mat psd_factor(const Mat& A, double rel_tol = 1e-10);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMat& A);

/// ||A - B||_F / max(||B||_F, tiny)
double relative_frobenius(const CMat& A, const CMat& B);

} // namespace cfsat
