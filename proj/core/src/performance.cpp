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

#include "cfsat/performance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfsat {

namespace {

Vec sqrt_column(const Mat& eta_ap, int k) { return eta_ap.col(k).cwiseMax(0.0).cwiseSqrt(); }

void check_shapes(const PowerAllocation& alloc, const PrecodingMoments& m) {
    if (alloc.eta_ap.rows() != m.L || alloc.eta_ap.cols() != m.K || alloc.eta_sn.size() != m.K)
        throw std::invalid_argument("power allocation does not match the moment tables");
}

} // namespace

double sinr_dl(int k, const PowerAllocation& alloc, const PrecodingMoments& moments,
               double noise_power) {
    check_shapes(alloc, moments);
    const Vec eta_k = sqrt_column(alloc.eta_ap, k);
    const double sat = moments.sat_signal(k);
    const double uav = moments.signal_gain(k).dot(eta_k);
    const double numerator = alloc.eta_sn(k) * sat * sat + uav * uav;

    double denominator = moments.sat_interference(k, alloc.eta_sn) + noise_power;
    for (int i = 0; i < moments.K; ++i) {
        const CVec eta_i = sqrt_column(alloc.eta_ap, i).cast<cplx>();
        denominator += (moments.cfac_at(k, i).adjoint() * eta_i).squaredNorm();
    }
    if (!(denominator > 0.0))
        throw std::runtime_error("sinr_dl: nonpositive interference-plus-noise");
    return numerator / denominator;
}

double se_dl(double sinr) { return std::log2(1.0 + sinr); }

double uav_transmit_power(int l, const PowerAllocation& alloc, const PrecodingMoments& moments) {
    return alloc.eta_ap.row(l).dot(moments.w_norm_sq.row(l));
}

double sat_transmit_power(const PowerAllocation& alloc, const PrecodingMoments& moments) {
    return alloc.eta_sn.dot(moments.sat_signal);
}

double total_power(const PowerAllocation& alloc, const PrecodingMoments& moments,
                   const ScenarioConfig& config) {
    check_shapes(alloc, moments);
    const double transmit = alloc.eta_ap.cwiseProduct(moments.w_norm_sq).sum();
    return transmit / config.amp_efficiency + config.static_power();
}

PowerAllocation apply_mode(PowerAllocation alloc, NetworkMode mode) {
    if (mode == NetworkMode::TnOnly) alloc.eta_sn.setZero();
    if (mode == NetworkMode::NtnOnly) alloc.eta_ap.setZero();
    return alloc;
}

PerformanceReport energy_efficiency(const PowerAllocation& alloc, const PrecodingMoments& moments,
                                    const ScenarioConfig& config) {
    const PowerAllocation a = apply_mode(alloc, config.mode);
    const double noise = config.noise_power();
    PerformanceReport rep;
    rep.sinr.resize(moments.K);
    rep.se.resize(moments.K);
    for (int k = 0; k < moments.K; ++k) {
        rep.sinr(k) = sinr_dl(k, a, moments, noise);
        rep.se(k) = se_dl(rep.sinr(k));
    }
    rep.sum_se = rep.se.sum();
    rep.p_tot = total_power(a, moments, config);
    rep.ee = rep.sum_se / rep.p_tot;
    return rep;
}

FeasibilityCheck check_feasibility(const PowerAllocation& alloc, const PrecodingMoments& moments,
                                   const ScenarioConfig& config, double budget_tol, double se_tol) {
    const PowerAllocation a = apply_mode(alloc, config.mode);
    FeasibilityCheck fc;
    for (int l = 0; l < moments.L; ++l) {
        const double p = uav_transmit_power(l, a, moments);
        const double ratio = config.P_ap_dl > 0.0 ? p / config.P_ap_dl
                                                  : (p > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        fc.worst_budget_ratio = std::max(fc.worst_budget_ratio, ratio);
        if (p > config.P_ap_dl * (1.0 + budget_tol) + 1e-300) fc.budget_ok = false;
    }
    fc.worst_se_margin = std::numeric_limits<double>::infinity();
    const double noise = config.noise_power();
    for (int k = 0; k < moments.K; ++k) {
        const double margin = se_dl(sinr_dl(k, a, moments, noise)) - config.se_min_for(k);
        fc.worst_se_margin = std::min(fc.worst_se_margin, margin);
        if (margin < -se_tol) fc.qos_ok = false;
    }
    return fc;
}

} // namespace cfsat
