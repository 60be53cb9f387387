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
#include "cfsat/moments.hpp"
#include "cfsat/scenario.hpp"

namespace cfsat {

/// Power-control coefficients in watts per unit precoder energy.
struct PowerAllocation {
    Mat eta_ap; ///< L x K
    Vec eta_sn; ///< K

    static PowerAllocation zeros(int L, int K) { return {Mat::Zero(L, K), Vec::Zero(K)}; }
};

struct PerformanceReport {
    Vec sinr;
    Vec se; ///< bit/s/Hz
    double sum_se = 0.0;
    double p_tot = 0.0; ///< W
    double ee = 0.0;    ///< bit/s/Hz/W

    /// Bandwidth-scaled figure in bit/J.
    double ee_bit_per_joule(double bandwidth) const { return ee * bandwidth; }
};

/// Closed-form hardening-bound SINR of GU k.
double sinr_dl(int k, const PowerAllocation& alloc, const PrecodingMoments& moments,
               double noise_power);

double se_dl(double sinr);

/// Transmit power of UAV l, sum_i eta_{l,i} E||w_{l,i}||^2.
double uav_transmit_power(int l, const PowerAllocation& alloc, const PrecodingMoments& moments);

/// Satellite transmit power, sum_i eta_sn_i E||g_i||^2.
double sat_transmit_power(const PowerAllocation& alloc, const PrecodingMoments& moments);

/// UAV-layer consumption: transmit power over amplifier efficiency plus static power.
double total_power(const PowerAllocation& alloc, const PrecodingMoments& moments,
                   const ScenarioConfig& config);

/// Zeroes the coefficients of whichever layer the mode switches off.
PowerAllocation apply_mode(PowerAllocation alloc, NetworkMode mode);

/// SINR/SE per GU, sum SE, power and EE, after applying config.mode.
PerformanceReport energy_efficiency(const PowerAllocation& alloc, const PrecodingMoments& moments,
                                    const ScenarioConfig& config);

struct FeasibilityCheck {
    bool budget_ok = true;
    bool qos_ok = true;
    double worst_budget_ratio = 0.0; ///< max_l P_l / P_ap_dl
    double worst_se_margin = 0.0;    ///< min_k SE_k - SE_min_k
    bool ok() const { return budget_ok && qos_ok; }
};

/// Re-checks the per-UAV budget (relative slack budget_tol) and the per-GU QoS
/// floor (absolute slack se_tol) for the mode-adjusted allocation.
FeasibilityCheck check_feasibility(const PowerAllocation& alloc, const PrecodingMoments& moments,
                                   const ScenarioConfig& config, double budget_tol = 1e-9,
                                   double se_tol = 0.0);

} // namespace cfsat
