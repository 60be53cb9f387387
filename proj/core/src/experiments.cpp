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

#include "cfsat/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "cfsat/config_io.hpp"
#include "cfsat/parallel.hpp"

namespace cfsat {

namespace {

constexpr std::uint64_t kStreamGeometry = 0;
constexpr std::uint64_t kStreamInit = 1;
constexpr std::uint64_t kStreamSe = 2;
constexpr std::uint64_t kStreamMoments = 3;

const std::vector<double> kFpaGrid{-0.5, 0.0, 0.5};

std::string fpa_name(double nu) {
    return "FPA(" + format_double(nu) + ")";
}

} // namespace

Rng scenario_rng(const ScenarioConfig& config, std::uint64_t seed, std::uint64_t stream) {
    return Rng(derive_seed(derive_seed(config.rng_seed, seed), stream));
}

Scenario make_scenario(const ScenarioConfig& config, std::uint64_t seed) {
    config.validate();
    Scenario s;
    s.config = config;
    s.seed = seed;
    Rng rng = scenario_rng(config, seed, kStreamGeometry);
    s.geometry = build_geometry(config, rng);
    s.channels = build_channels(s.geometry, config, rng);
    s.moments = assemble_moments(s.channels, config.moment_mode);
    return s;
}

EemOutcome eem_allocation(const Scenario& scenario) {
    const ScenarioConfig& cfg = scenario.config;
    EemOutcome out;
    Rng rng = scenario_rng(cfg, scenario.seed, kStreamInit);
    try {
        out.init = random_search_init(cfg, scenario.moments, rng);
    } catch (const InfeasibleScenario& e) {
        out.feasible = false;
        out.violated_users = e.violated_users();
        out.init = equal_allocation(cfg, scenario.moments);
        out.sca.alloc = out.init;
        out.sca.report = energy_efficiency(out.init, scenario.moments, cfg);
        out.sca.diagnostic = e.what();
        return out;
    }
    out.sca = sca_solve(cfg, scenario.moments, out.init);
    return out;
}

std::vector<std::uint64_t> seed_range(int n) {
    std::vector<std::uint64_t> s(static_cast<std::size_t>(std::max(n, 0)));
    std::iota(s.begin(), s.end(), std::uint64_t{1});
    return s;
}

std::vector<CdfRow> run_cdf(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds,
                            const CdfOptions& options) {
    config.validate();
    const std::string hash = config_hash(config);
    std::vector<std::vector<CdfRow>> per_seed(seeds.size());
    parallel_for(
        static_cast<int>(seeds.size()),
        [&](int j) {
            const std::uint64_t seed = seeds[static_cast<std::size_t>(j)];
            const Scenario base = make_scenario(config, seed);
            auto& rows = per_seed[static_cast<std::size_t>(j)];
            for (NetworkMode mode : options.modes) {
                for (double psn : options.p_sn) {
                    Scenario sc = base;
                    sc.config.mode = mode;
                    sc.config.P_sn_dl = psn;
                    const EemOutcome eem = eem_allocation(sc);
                    const PerformanceReport rep = energy_efficiency(eem.sca.alloc, sc.moments, sc.config);
                    SeEstimate mc;
                    if (options.with_mc) {
                        mc = estimate_se(sc.config, sc.channels, eem.sca.alloc, sc.config.mc_trials,
                                         derive_seed(derive_seed(config.rng_seed, seed), kStreamSe));
                    }
                    for (int k = 0; k < sc.config.K; ++k) {
                        CdfRow r;
                        r.config_hash = hash;
                        r.seed = seed;
                        r.mode = mode;
                        r.p_sn = psn;
                        r.gu = k;
                        r.se = rep.se(k);
                        r.feasible = eem.feasible;
                        if (options.with_mc) {
                            r.has_mc = true;
                            r.se_mc = mc.se(k);
                            r.se_mc_err = mc.se_err(k);
                        }
                        rows.push_back(r);
                    }
                }
            }
        },
        options.workers);
    std::vector<CdfRow> out;
    for (auto& v : per_seed) out.insert(out.end(), v.begin(), v.end());
    return out;
}

std::vector<std::string> strategy_names() {
    std::vector<std::string> n{"EEM", "EPA"};
    for (double nu : kFpaGrid) n.push_back(fpa_name(nu));
    return n;
}

std::vector<RunRow> evaluate_strategies(const ScenarioConfig& config,
                                        const std::vector<std::uint64_t>& seeds, int workers) {
    config.validate();
    const std::string hash = config_hash(config);
    std::vector<std::vector<RunRow>> per_seed(seeds.size());
    parallel_for(
        static_cast<int>(seeds.size()),
        [&](int j) {
            const std::uint64_t seed = seeds[static_cast<std::size_t>(j)];
            const Scenario sc = make_scenario(config, seed);
            auto& rows = per_seed[static_cast<std::size_t>(j)];
            auto emit = [&](const std::string& name, const PowerAllocation& a, int iters, bool conv) {
                const PerformanceReport rep = energy_efficiency(a, sc.moments, config);
                RunRow r;
                r.config_hash = hash;
                r.seed = seed;
                r.L = config.L;
                r.K = config.K;
                r.strategy = name;
                r.ee = rep.ee;
                r.sum_se = rep.sum_se;
                r.p_tot = rep.p_tot;
                r.qos_ok = check_feasibility(a, sc.moments, config).qos_ok;
                r.sca_iterations = iters;
                r.sca_converged = conv;
                rows.push_back(r);
            };
            const EemOutcome eem = eem_allocation(sc);
            emit("EEM", eem.sca.alloc, eem.sca.iterations(), eem.sca.converged);
            emit("EPA", equal_allocation(config, sc.moments), 0, true);
            for (double nu : kFpaGrid) emit(fpa_name(nu), fractional_allocation(config, sc.moments, nu), 0, true);
        },
        workers);
    std::vector<RunRow> out;
    for (auto& v : per_seed) out.insert(out.end(), v.begin(), v.end());
    return out;
}

namespace {

std::vector<CurveRow> aggregate(const ScenarioConfig& config, const std::vector<RunRow>& runs) {
    std::vector<CurveRow> out;
    for (const auto& name : strategy_names()) {
        std::vector<double> ee;
        for (const auto& r : runs)
            if (r.strategy == name) ee.push_back(r.ee);
        if (ee.empty()) continue;
        const double mean = std::accumulate(ee.begin(), ee.end(), 0.0) / static_cast<double>(ee.size());
        double ss = 0.0;
        for (double v : ee) ss += (v - mean) * (v - mean);
        CurveRow c;
        c.config_hash = config_hash(config);
        c.seed = config.rng_seed;
        c.n_seeds = static_cast<int>(ee.size());
        c.L = config.L;
        c.K = config.K;
        c.strategy = name;
        c.mean_ee = mean;
        c.std_ee = ee.size() > 1 ? std::sqrt(ss / static_cast<double>(ee.size() - 1)) : 0.0;
        out.push_back(c);
    }
    return out;
}

CurveResult sweep(const ScenarioConfig& config, const std::vector<int>& values, int ScenarioConfig::*field,
                  const std::vector<std::uint64_t>& seeds, int workers) {
    CurveResult res;
    for (int v : values) {
        ScenarioConfig c = config;
        c.*field = v;
        const auto runs = evaluate_strategies(c, seeds, workers);
        const auto curve = aggregate(c, runs);
        res.runs.insert(res.runs.end(), runs.begin(), runs.end());
        res.curve.insert(res.curve.end(), curve.begin(), curve.end());
    }
    return res;
}

} // namespace

CurveResult run_ee_vs_uavs(const ScenarioConfig& config, const std::vector<int>& L_values,
                           const std::vector<std::uint64_t>& seeds, int workers) {
    return sweep(config, L_values, &ScenarioConfig::L, seeds, workers);
}

CurveResult run_ee_vs_gus(const ScenarioConfig& config, const std::vector<int>& K_values,
                          const std::vector<std::uint64_t>& seeds, int workers) {
    ScenarioConfig c = config;
    if (c.se_min.size() > 1) c.se_min.resize(1); // per-GU floors do not survive a K sweep
    return sweep(c, K_values, &ScenarioConfig::K, seeds, workers);
}

ValidateReport run_validate(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds,
                            bool check_moments, int workers) {
    config.validate();
    const std::string hash = config_hash(config);
    std::vector<std::vector<ValidateRow>> rows(seeds.size());
    std::vector<ZScoreSummary> moments(seeds.size());
    parallel_for(
        static_cast<int>(seeds.size()),
        [&](int j) {
            const std::uint64_t seed = seeds[static_cast<std::size_t>(j)];
            const Scenario sc = make_scenario(config, seed);
            const std::uint64_t base = derive_seed(config.rng_seed, seed);
            const PowerAllocation epa = apply_mode(equal_allocation(config, sc.moments), config.mode);
            const PerformanceReport cf = energy_efficiency(epa, sc.moments, config);
            const SeEstimate mc =
                estimate_se(config, sc.channels, epa, config.mc_trials, derive_seed(base, kStreamSe));
            for (int k = 0; k < config.K; ++k) {
                ValidateRow r;
                r.config_hash = hash;
                r.seed = seed;
                r.gu = k;
                r.se_cf = cf.se(k);
                r.se_mc = mc.se(k);
                r.se_err = mc.se_err(k);
                const double diff = std::abs(r.se_cf - r.se_mc);
                r.z = r.se_err > 0.0 ? diff / r.se_err
                                     : (diff <= 1e-9 * std::max(1.0, r.se_cf) ? 0.0 : INFINITY);
                rows[static_cast<std::size_t>(j)].push_back(r);
            }
            if (check_moments) {
                const MomentEstimate est =
                    estimate_moments(sc.channels, config.mc_trials, derive_seed(base, kStreamMoments));
                moments[static_cast<std::size_t>(j)] = compare_moments(est, sc.moments);
            }
        },
        workers);

    ValidateReport rep;
    for (std::size_t j = 0; j < seeds.size(); ++j) {
        for (const auto& r : rows[j]) {
            ++rep.entries;
            if (r.z > 3.0) ++rep.beyond_3;
            rep.max_z = std::max(rep.max_z, r.z);
            rep.rows.push_back(r);
        }
        if (check_moments) {
            rep.entries += moments[j].entries;
            rep.beyond_3 += moments[j].beyond_3;
            rep.max_z = std::max(rep.max_z, moments[j].max_z);
            rep.moments.push_back(moments[j]);
        }
    }
    const double frac = rep.entries ? static_cast<double>(rep.beyond_3) / rep.entries : 0.0;
    rep.passed = frac <= 0.01 && rep.max_z <= 5.0;
    return rep;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

const char* flag(bool b) { return b ? "1" : "0"; }

} // namespace

void write_csv(std::ostream& os, const std::vector<CdfRow>& rows) {
    os << "config_hash,seed,mode,p_sn,gu,se,feasible,se_mc,se_mc_err\n";
    for (const auto& r : rows) {
        os << r.config_hash << ',' << r.seed << ',' << to_string(r.mode) << ',' << format_double(r.p_sn) << ','
           << r.gu << ',' << format_double(r.se) << ',' << flag(r.feasible) << ',';
        if (r.has_mc) os << format_double(r.se_mc) << ',' << format_double(r.se_mc_err);
        else os << ',';
        os << '\n';
    }
}

void write_csv(std::ostream& os, const std::vector<RunRow>& rows) {
    os << "config_hash,seed,L,K,strategy,ee,sum_se,p_tot,qos_ok,sca_iterations,sca_converged\n";
    for (const auto& r : rows) {
        os << r.config_hash << ',' << r.seed << ',' << r.L << ',' << r.K << ',' << r.strategy << ','
           << format_double(r.ee) << ',' << format_double(r.sum_se) << ',' << format_double(r.p_tot) << ','
           << flag(r.qos_ok) << ',' << r.sca_iterations << ',' << flag(r.sca_converged) << '\n';
    }
}

void write_csv(std::ostream& os, const std::vector<CurveRow>& rows) {
    os << "config_hash,seed,n_seeds,L,K,strategy,mean_ee,std_ee\n";
    for (const auto& r : rows) {
        os << r.config_hash << ',' << r.seed << ',' << r.n_seeds << ',' << r.L << ',' << r.K << ','
           << r.strategy << ',' << format_double(r.mean_ee) << ',' << format_double(r.std_ee) << '\n';
    }
}

void write_csv(std::ostream& os, const std::vector<ValidateRow>& rows) {
    os << "config_hash,seed,gu,se_cf,se_mc,se_err,z\n";
    for (const auto& r : rows) {
        os << r.config_hash << ',' << r.seed << ',' << r.gu << ',' << format_double(r.se_cf) << ','
           << format_double(r.se_mc) << ',' << format_double(r.se_err) << ',' << format_double(r.z) << '\n';
    }
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of an empty set");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double hi = values[mid];
    if (values.size() % 2 == 1) return hi;
    const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

} // namespace cfsat
