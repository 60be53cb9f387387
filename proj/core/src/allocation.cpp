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

#include "cfsat/allocation.hpp"

#include <cmath>
#include <sstream>

namespace cfsat {

Vec fractional_pa(double nu, double budget, const Vec& traces) {
    if (budget < 0.0) throw std::invalid_argument("fractional_pa: negative budget");
    if (traces.size() == 0) return Vec();
    if ((traces.array() < 0.0).any()) throw std::invalid_argument("fractional_pa: negative trace");
    if (nu < 0.0 && (traces.array() == 0.0).any())
        throw std::invalid_argument("fractional_pa: zero trace with negative exponent");

    const Vec numer = traces.array().pow(nu);
    const double denom = traces.array().pow(nu + 1.0).sum();
    if (!(denom > 0.0)) throw std::invalid_argument("fractional_pa: all traces are zero");
    return budget * numer / denom;
}

Vec satellite_epa(const ScenarioConfig& config, const PrecodingMoments& moments) {
    return fractional_pa(-1.0, config.P_sn_dl, moments.sat_signal);
}

PowerAllocation fractional_allocation(const ScenarioConfig& config, const PrecodingMoments& moments,
                                      double nu) {
    PowerAllocation a = PowerAllocation::zeros(moments.L, moments.K);
    for (int l = 0; l < moments.L; ++l) {
        a.eta_ap.row(l) =
            fractional_pa(nu, config.P_ap_dl, moments.w_norm_sq.row(l).transpose()).transpose();
    }
    a.eta_sn = fractional_pa(nu, config.P_sn_dl, moments.sat_signal);
    return apply_mode(std::move(a), config.mode);
}

namespace {

std::vector<int> violated_users(const PowerAllocation& alloc, const PrecodingMoments& moments,
                                const ScenarioConfig& config) {
    std::vector<int> out;
    const double noise = config.noise_power();
    for (int k = 0; k < moments.K; ++k) {
        if (se_dl(sinr_dl(k, alloc, moments, noise)) < config.se_min_for(k)) out.push_back(k);
    }
    return out;
}

} // namespace

PowerAllocation random_search_init(const ScenarioConfig& config, const PrecodingMoments& moments,
                                   Rng& rng, const RandomSearchOptions& options,
                                   RandomSearchStats* stats) {
    const int L = moments.L;
    const int K = moments.K;
    const int G = config.rs_grid;
    if (G < 2) throw std::invalid_argument("random_search_init: grid needs at least 2 points");

    PowerAllocation a = PowerAllocation::zeros(L, K);
    a.eta_sn = satellite_epa(config, moments);
    a = apply_mode(std::move(a), config.mode);

    RandomSearchStats local;
    RandomSearchStats& st = stats ? *stats : local;
    st = {};

    const double step = config.P_ap_dl / (G - 1);
    std::uniform_int_distribution<int> pick(0, G - 1);
    const bool uav_active = config.mode != NetworkMode::NtnOnly;

    for (int attempt = 1; uav_active && attempt <= options.max_attempts; ++attempt) {
        st.attempts = attempt;
        for (int l = 0; l < L; ++l) {
            Vec p(K);
            for (int k = 0; k < K; ++k) p(k) = step * pick(rng);
            const double used = p.sum();
            if (used > config.P_ap_dl && used > 0.0) p *= config.P_ap_dl / used;
            for (int k = 0; k < K; ++k) {
                const double w = moments.w_norm_sq(l, k);
                a.eta_ap(l, k) = w > 0.0 ? p(k) / w : 0.0;
            }
        }
        if (violated_users(a, moments, config).empty()) return a;
    }

    st.used_fallback = true;
    PowerAllocation epa = equal_allocation(config, moments);
    epa.eta_sn = a.eta_sn;
    const std::vector<int> bad = violated_users(epa, moments, config);
    if (bad.empty()) return epa;

    std::ostringstream msg;
    msg << "no feasible starting point: SE_min violated for GU";
    for (int k : bad) msg << ' ' << k;
    throw InfeasibleScenario(msg.str(), bad);
}

} // namespace cfsat
