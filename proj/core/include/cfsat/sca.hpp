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

#include <string>
#include <vector>

#include "cfsat/common.hpp"
#include "cfsat/conic.hpp"
#include "cfsat/moments.hpp"
#include "cfsat/performance.hpp"
#include "cfsat/scenario.hpp"

namespace cfsat {

/// Lower clip of the inverse-SINR auxiliaries.
inline constexpr double kGammaMin = 1e-8;

/// State of the successive convex approximation.
struct ScaIterate {
    Mat eta_sqrt; ///< L x K, column k is eta_k (entrywise sqrt of UAV coefficients)
    Vec eta_sn;   ///< K, satellite coefficients (held fixed)
    Vec r;        ///< K, per-GU share of the EE
    Vec gamma;    ///< K, inverse SINR
    Vec xi;       ///< K, interference plus noise (W)
    double t = 0.0; ///< total power (W)

    double objective() const { return r.sum(); }
    PowerAllocation allocation() const;
};

/// value + du (u - u0) + dv (v - v0)
struct Linearization2 {
    double u0 = 0.0;
    double v0 = 0.0;
    double value = 0.0;
    double du = 0.0;
    double dv = 0.0;
    double operator()(double u, double v) const { return value + du * (u - u0) + dv * (v - v0); }
};

/// Tangent of log2(1 + 1/gamma) / t at (gamma_bar, t_bar); u = gamma, v = t.
Linearization2 linearize_rate_over_power(double gamma_bar, double t_bar);

/// Tangent of xi / gamma at (xi_bar, gamma_bar); u = xi, v = gamma.
Linearization2 linearize_fraction(double xi_bar, double gamma_bar);

/// constant + grad . eta
struct AffineForm {
    Vec grad;
    double constant = 0.0;
    double operator()(const Vec& eta) const { return constant + grad.dot(eta); }
};

/// Tangent of (b' eta)^2 at eta_bar: 2 (b' eta_bar) b' eta - (b' eta_bar)^2.
AffineForm linearize_signal_quadratic(const Vec& b_kk, const Vec& eta_bar);

/// gamma upper limit 1 / (2^SE_min - 1).
double gamma_max(double se_min);

ScaIterate init_state(const ScenarioConfig& config, const PrecodingMoments& moments,
                      const PowerAllocation& init_alloc);

/// Variable layout of the subproblem. UAV powers enter as x_{l,k} = sqrt(eta_{l,k} E||w_{l,k}||^2),
/// interference auxiliaries in units of the noise power.
struct SubproblemIndex {
    int L = 0;
    int K = 0;
    int x(int l, int k) const { return k * L + l; }
    int r(int k) const { return L * K + k; }
    int gamma(int k) const { return L * K + K + k; }
    int xi(int k) const { return L * K + 2 * K + k; }
    int t() const { return L * K + 3 * K; }
    int count() const { return L * K + 3 * K + 1; }
};

/// Convex surrogate expanded at `state`. Constraint tags: budget_l, power, interference_k,
/// signal_k, rate_k.
conic::ConicProblem build_subproblem(const ScaIterate& state, const PrecodingMoments& moments,
                                     const ScenarioConfig& config);

/// Maps a subproblem solution back to a state (r, gamma, xi, t taken verbatim).
ScaIterate extract_iterate(const Vec& x, const ScaIterate& previous, const PrecodingMoments& moments,
                           const ScenarioConfig& config);

/// Re-tightens the auxiliaries to the true SINR and power of eta_sqrt, so that
/// sum r equals the EE.
ScaIterate tighten(ScaIterate state, const PrecodingMoments& moments, const ScenarioConfig& config);

/// |cur - prev| / |prev| <= eps
bool sca_converged(double previous, double current, double eps);

/// Index of the trace value at which the stopping rule fires, or -1.
int sca_stop_index(const std::vector<double>& objectives, double eps);

struct ScaTraceEntry {
    double objective = 0.0; ///< sum r after the iteration
    double ee = 0.0;        ///< closed-form EE of the iterate
    conic::SolveStatus status = conic::SolveStatus::Optimal;
    double step = 0.0;      ///< accepted fraction of the subproblem move
    int solver_iterations = 0;
    double expansion_violation = 0.0; ///< largest violation of the subproblem at its expansion point
};

struct ScaOptions {
    conic::SolverOptions solver;
    int max_backtracks = 30;
};

struct ScaResult {
    PowerAllocation alloc;
    PerformanceReport report;
    std::vector<ScaTraceEntry> trace; ///< entry 0 is the initial state
    bool converged = false;
    bool max_iters_reached = false;
    bool subproblem_failed = false;
    std::string diagnostic;
    int iterations() const { return static_cast<int>(trace.size()) - 1; }
};

/// Successive convex approximation of the EE maximization; satellite
/// coefficients stay at their initial values.
ScaResult sca_solve(const ScenarioConfig& config, const PrecodingMoments& moments,
                    const PowerAllocation& init_alloc, const ScaOptions& options = {});

} // namespace cfsat
