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
#include <iosfwd>
#include <string>
#include <vector>

#include "cfsat/allocation.hpp"
#include "cfsat/channel.hpp"
#include "cfsat/moments.hpp"
#include "cfsat/montecarlo.hpp"
#include "cfsat/performance.hpp"
#include "cfsat/sca.hpp"
#include "cfsat/scenario.hpp"

namespace cfsat {

/// One drop: geometry, link statistics and closed-form moments.
struct Scenario {
    ScenarioConfig config;
    std::uint64_t seed = 0;
    Geometry geometry;
    ChannelSet channels;
    PrecodingMoments moments;
};

/// Independent engine for (config.rng_seed, seed, stream).
Rng scenario_rng(const ScenarioConfig& config, std::uint64_t seed, std::uint64_t stream);

/// Geometry and shadowing come from stream 0.
Scenario make_scenario(const ScenarioConfig& config, std::uint64_t seed);

struct EemOutcome {
    PowerAllocation init;
    ScaResult sca;
    bool feasible = true;            ///< a QoS-feasible starting point existed
    std::vector<int> violated_users; ///< when infeasible
};

/// Random-search initialization (stream 1) followed by SCA. When no feasible
/// start exists the EPA allocation is returned unoptimized and flagged.
EemOutcome eem_allocation(const Scenario& scenario);

/// Seeds 1..n.
std::vector<std::uint64_t> seed_range(int n);

// ---------------------------------------------------------------------------
// Experiment tables. Every row carries the config hash and the seed.

struct CdfRow {
    std::string config_hash;
    std::uint64_t seed = 0;
    NetworkMode mode = NetworkMode::NtnTn;
    double p_sn = 0.0;
    int gu = 0;
    double se = 0.0;
    bool feasible = true;
    bool has_mc = false;
    double se_mc = 0.0;
    double se_mc_err = 0.0;
};

struct CdfOptions {
    std::vector<NetworkMode> modes{NetworkMode::NtnTn, NetworkMode::TnOnly, NetworkMode::NtnOnly};
    std::vector<double> p_sn{10.0, 50.0, 100.0};
    bool with_mc = false;
    int workers = 0;
};

std::vector<CdfRow> run_cdf(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds,
                            const CdfOptions& options = {});

/// Strategy labels: EEM, EPA, FPA(-0.5), FPA(0), FPA(0.5).
std::vector<std::string> strategy_names();

struct RunRow {
    std::string config_hash;
    std::uint64_t seed = 0;
    int L = 0;
    int K = 0;
    std::string strategy;
    double ee = 0.0;
    double sum_se = 0.0;
    double p_tot = 0.0;
    bool qos_ok = true;
    int sca_iterations = 0;
    bool sca_converged = true;
};

struct CurveRow {
    std::string config_hash;
    std::uint64_t seed = 0; ///< base rng_seed
    int n_seeds = 0;
    int L = 0;
    int K = 0;
    std::string strategy;
    double mean_ee = 0.0;
    double std_ee = 0.0;
};

struct CurveResult {
    std::vector<RunRow> runs;
    std::vector<CurveRow> curve;
};

/// Every strategy on every seed of one configuration.
std::vector<RunRow> evaluate_strategies(const ScenarioConfig& config,
                                        const std::vector<std::uint64_t>& seeds, int workers = 0);

CurveResult run_ee_vs_uavs(const ScenarioConfig& config, const std::vector<int>& L_values,
                           const std::vector<std::uint64_t>& seeds, int workers = 0);
CurveResult run_ee_vs_gus(const ScenarioConfig& config, const std::vector<int>& K_values,
                          const std::vector<std::uint64_t>& seeds, int workers = 0);

struct ValidateRow {
    std::string config_hash;
    std::uint64_t seed = 0;
    int gu = 0;
    double se_cf = 0.0;
    double se_mc = 0.0;
    double se_err = 0.0;
    double z = 0.0;
};

struct ValidateReport {
    std::vector<ValidateRow> rows;
    std::vector<ZScoreSummary> moments; ///< per seed
    long entries = 0;
    long beyond_3 = 0;
    double max_z = 0.0;
    bool passed = true;
};

/// Closed-form vs sampled SE under EPA, plus the moment tables, per seed.
/// Fails when more than 1% of all compared entries exceed 3 standard errors
/// or any exceeds 5.
ValidateReport run_validate(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds,
                            bool check_moments = true, int workers = 0);

void write_csv(std::ostream& os, const std::vector<CdfRow>& rows);
void write_csv(std::ostream& os, const std::vector<RunRow>& rows);
void write_csv(std::ostream& os, const std::vector<CurveRow>& rows);
void write_csv(std::ostream& os, const std::vector<ValidateRow>& rows);

double median(std::vector<double> values);

} // namespace cfsat
