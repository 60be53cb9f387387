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

#include <stdexcept>
#include <string>
#include <vector>

#include "cfsat/common.hpp"
#include "cfsat/moments.hpp"
#include "cfsat/performance.hpp"
#include "cfsat/scenario.hpp"

namespace cfsat {

/// Thrown when no starting point meets every GU's QoS floor.
class InfeasibleScenario : public std::runtime_error {
public:
    InfeasibleScenario(const std::string& what, std::vector<int> violated)
        : std::runtime_error(what), violated_(std::move(violated)) {}
    const std::vector<int>& violated_users() const { return violated_; }

private:
    std::vector<int> violated_;
};

/// Fractional power allocation for one transmitter:
/// eta_k = budget * tr_k^nu / sum_i tr_i^(nu+1), which saturates the budget exactly.
Vec fractional_pa(double nu, double budget, const Vec& traces);

/// FPA with exponent nu on every UAV and on the satellite.
PowerAllocation fractional_allocation(const ScenarioConfig& config, const PrecodingMoments& moments,
                                      double nu);

/// Equal power allocation is FPA with nu = -1.
inline PowerAllocation equal_allocation(const ScenarioConfig& config,
                                        const PrecodingMoments& moments) {
    return fractional_allocation(config, moments, -1.0);
}

/// Satellite coefficients under EPA: eta_k tr(E^g_k) = P_sn_dl / K.
Vec satellite_epa(const ScenarioConfig& config, const PrecodingMoments& moments);

struct RandomSearchOptions {
    int max_attempts = 10000;
};

struct RandomSearchStats {
    int attempts = 0;
    bool used_fallback = false;
};

/// Random search over a G-point grid of per-link transmit powers in [0, P_ap_dl],
/// rows rescaled onto the UAV budget, accepted once every GU meets SE_min.
/// Falls back to EPA; throws InfeasibleScenario if that also misses the floor.
/// Satellite coefficients follow EPA (zero in TN_ONLY).
PowerAllocation random_search_init(const ScenarioConfig& config, const PrecodingMoments& moments,
                                   Rng& rng, const RandomSearchOptions& options = {},
                                   RandomSearchStats* stats = nullptr);

} // namespace cfsat
