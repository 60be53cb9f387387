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

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace cfsat {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// All randomness in the library flows through this engine type so that a
// (config, seed) pair reproduces bit-identical results.
using Rng = std::mt19937_64;

inline constexpr double kPi = std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// SplitMix64 finalizer; derives independent stream seeds from (base, stream id).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Circularly-symmetric complex Gaussian with unit variance (E|x|^2 = 1).
inline cplx draw_cn(Rng& rng) {
    std::normal_distribution<double> n(0.0, std::numbers::sqrt2 / 2.0);
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}

} // namespace cfsat
