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

#include <cstdint>
#include <vector>

#include "cfsat/channel.hpp"
#include "cfsat/common.hpp"
#include "cfsat/moments.hpp"
#include "cfsat/performance.hpp"
#include "cfsat/scenario.hpp"

namespace cfsat {

/// Trials per random stream. Stream c draws trials [c*kTrialsPerChunk, ...)
/// from an engine seeded with derive_seed(seed, c), so estimates do not depend
/// on the number of workers.
inline constexpr int kTrialsPerChunk = 1000;

/// Sample means of the precoding expectations with standard errors. Complex
/// entries carry separate errors for the real and imaginary parts.
struct MomentEstimate {
    int L = 0;
    int K = 0;
    long trials = 0;
    std::uint64_t seed = 0;

    std::vector<CVec> b; ///< [k*K + i], E{psi_{k,i}}
    std::vector<Vec> b_se_re;
    std::vector<Vec> b_se_im;
    std::vector<CMat> raw2; ///< [k*K + i], E{psi_{k,i} psi_{k,i}^H}
    std::vector<Mat> raw2_se_re;
    std::vector<Mat> raw2_se_im;
    Mat w_norm_sq, w_norm_sq_se; ///< L x K
    Vec sat_signal, sat_signal_se;
    Vec sat_fourth, sat_fourth_se;
    Mat sat_cross, sat_cross_se; ///< K x K, zero diagonal
};

/// Draws `trials` channel realizations of every link and averages
/// psi_{k,i}[l] = h_{l,i}^H h_{l,k}, its outer products, and the satellite terms.
MomentEstimate estimate_moments(const ChannelSet& channels, long trials, std::uint64_t seed);

struct ZScoreSummary {
    long entries = 0;
    long beyond_3 = 0;
    double max_z = 0.0;
    double fraction_beyond_3() const { return entries ? static_cast<double>(beyond_3) / entries : 0.0; }
};

/// |estimate - closed form| / se over every real component. Zero-variance
/// entries count as agreeing when they match to 1e-9 relative.
ZScoreSummary compare_moments(const MomentEstimate& est, const PrecodingMoments& closed_form);

struct SeEstimate {
    Vec se;     ///< per-GU SE with expectations replaced by sample means
    Vec se_err; ///< delete-one jackknife standard error
    Vec sinr;
    long trials = 0;
};

/// Hardening-bound SE evaluated from sampled channels under maximum-ratio precoding.
SeEstimate estimate_se(const ScenarioConfig& config, const ChannelSet& channels,
                       const PowerAllocation& alloc, long trials, std::uint64_t seed);

} // namespace cfsat
