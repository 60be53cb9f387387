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

#include "cfsat/sca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfsat {

PowerAllocation ScaIterate::allocation() const {
    PowerAllocation a;
    a.eta_ap = eta_sqrt.cwiseAbs2();
    a.eta_sn = eta_sn;
    return a;
}

Linearization2 linearize_rate_over_power(double gamma_bar, double t_bar) {
    if (!(gamma_bar > 0.0) || !(t_bar > 0.0))
        throw std::invalid_argument("linearize_rate_over_power: expansion point must be positive");
    const double rate = std::log2(1.0 + 1.0 / gamma_bar);
    Linearization2 f;
    f.u0 = gamma_bar;
    f.v0 = t_bar;
    f.value = rate / t_bar;
    f.du = -1.0 / (gamma_bar * gamma_bar * t_bar * (1.0 + 1.0 / gamma_bar) * std::log(2.0));
    f.dv = -rate / (t_bar * t_bar);
    return f;
}

Linearization2 linearize_fraction(double xi_bar, double gamma_bar) {
    if (!(gamma_bar > 0.0)) throw std::invalid_argument("linearize_fraction: gamma_bar must be positive");
    Linearization2 f;
    f.u0 = xi_bar;
    f.v0 = gamma_bar;
    f.value = xi_bar / gamma_bar;
    f.du = 1.0 / gamma_bar;
    f.dv = -xi_bar / (gamma_bar * gamma_bar);
    return f;
}

AffineForm linearize_signal_quadratic(const Vec& b_kk, const Vec& eta_bar) {
    const double s = b_kk.dot(eta_bar);
    return {2.0 * s * b_kk, -s * s};
}

double gamma_max(double se_min) {
    if (!(se_min > 0.0)) throw std::invalid_argument("gamma_max: SE_min must be positive");
    return 1.0 / (std::exp2(se_min) - 1.0);
}

namespace {

double signal_power(int k, const Mat& eta_sqrt, const Vec& eta_sn, const PrecodingMoments& m) {
    const double uav = m.signal_gain(k).dot(eta_sqrt.col(k));
    return eta_sn(k) * m.sat_signal(k) * m.sat_signal(k) + uav * uav;
}

double interference_power(int k, const Mat& eta_sqrt, const Vec& eta_sn, const PrecodingMoments& m,
                          double noise) {
    double acc = m.sat_interference(k, eta_sn) + noise;
    for (int i = 0; i < m.K; ++i) acc += (m.cfac_at(k, i).adjoint() * eta_sqrt.col(i).cast<cplx>()).squaredNorm();
    return acc;
}

Vec state_vector(const ScaIterate& s, const PrecodingMoments& m, double noise) {
    const SubproblemIndex ix{m.L, m.K};
    Vec x(ix.count());
    for (int k = 0; k < m.K; ++k) {
        for (int l = 0; l < m.L; ++l) x(ix.x(l, k)) = s.eta_sqrt(l, k) * std::sqrt(m.w_norm_sq(l, k));
        x(ix.r(k)) = s.r(k);
        x(ix.gamma(k)) = s.gamma(k);
        x(ix.xi(k)) = s.xi(k) / noise;
    }
    x(ix.t()) = s.t;
    return x;
}

} // namespace

ScaIterate init_state(const ScenarioConfig& config, const PrecodingMoments& moments,
                      const PowerAllocation& init_alloc) {
    const PowerAllocation a = apply_mode(init_alloc, config.mode);
    ScaIterate s;
    s.eta_sqrt = a.eta_ap.cwiseMax(0.0).cwiseSqrt();
    s.eta_sn = a.eta_sn;
    s.r.resize(moments.K);
    s.gamma.resize(moments.K);
    s.xi.resize(moments.K);
    s.t = total_power(a, moments, config);
    for (int k = 0; k < moments.K; ++k) {
        s.gamma(k) = gamma_max(config.se_min_for(k));
        s.xi(k) = s.gamma(k) * signal_power(k, s.eta_sqrt, s.eta_sn, moments);
        s.r(k) = std::log2(1.0 + 1.0 / s.gamma(k)) / s.t;
    }
    return s;
}

ScaIterate tighten(ScaIterate s, const PrecodingMoments& moments, const ScenarioConfig& config) {
    const double noise = config.noise_power();
    s.t = total_power(s.allocation(), moments, config);
    for (int k = 0; k < moments.K; ++k) {
        const double sig = signal_power(k, s.eta_sqrt, s.eta_sn, moments);
        const double den = interference_power(k, s.eta_sqrt, s.eta_sn, moments, noise);
        s.xi(k) = den;
        s.gamma(k) = sig > 0.0 ? std::max(kGammaMin, den / sig) : std::numeric_limits<double>::infinity();
        s.r(k) = std::log2(1.0 + 1.0 / s.gamma(k)) / s.t;
    }
    return s;
}

conic::ConicProblem build_subproblem(const ScaIterate& state, const PrecodingMoments& moments,
                                     const ScenarioConfig& config) {
    using conic::kInf;
    const int L = moments.L;
    const int K = moments.K;
    const SubproblemIndex ix{L, K};
    const double noise = config.noise_power();
    const double sigma = std::sqrt(noise);
    const bool uav_on = config.mode != NetworkMode::NtnOnly;

    conic::ConicProblem p;
    for (int k = 0; k < K; ++k)
        for (int l = 0; l < L; ++l)
            p.add_variable("x_" + std::to_string(l) + "_" + std::to_string(k), 0.0, uav_on ? kInf : 0.0);
    for (int k = 0; k < K; ++k) p.add_variable("r_" + std::to_string(k));
    for (int k = 0; k < K; ++k)
        p.add_variable("gamma_" + std::to_string(k), kGammaMin, gamma_max(config.se_min_for(k)));
    for (int k = 0; k < K; ++k) p.add_variable("xi_" + std::to_string(k), 0.0, kInf);
    p.add_variable("t", config.static_power(), kInf);

    conic::SparseTerms objective;
    for (int k = 0; k < K; ++k) objective.emplace_back(ix.r(k), 1.0);
    p.set_objective(conic::Sense::Maximize, std::move(objective));

    const Vec xbar = state_vector(state, moments, noise);
    const int n = ix.count();

    // Per-UAV budget: sum_k x_{l,k}^2 <= P_ap_dl.
    for (int l = 0; l < L; ++l) {
        std::vector<Eigen::Triplet<double>> trip;
        for (int k = 0; k < K; ++k) trip.emplace_back(k, ix.x(l, k), 1.0);
        conic::SparseMat F(K, n);
        F.setFromTriplets(trip.begin(), trip.end());
        p.add_quadratic_le(std::move(F), {}, config.P_ap_dl, "budget_" + std::to_string(l));
    }

    // Total power: sum x^2 / eps + static <= t.
    {
        std::vector<Eigen::Triplet<double>> trip;
        const double f = 1.0 / std::sqrt(config.amp_efficiency);
        for (int k = 0; k < K; ++k)
            for (int l = 0; l < L; ++l) trip.emplace_back(ix.x(l, k), ix.x(l, k), f);
        conic::SparseMat F(L * K, n);
        F.setFromTriplets(trip.begin(), trip.end());
        p.add_quadratic_le(std::move(F), {{ix.t(), -1.0}}, -config.static_power(), "power");
    }

    for (int k = 0; k < K; ++k) {
        const std::string sk = std::to_string(k);

        // Interference: sum_i ||Cfac_{k,i}^H eta_i||^2 / noise + B_k / noise + 1 <= xi_k.
        std::vector<Eigen::Triplet<double>> trip;
        int row = 0;
        for (int i = 0; i < K; ++i) {
            const CMat A = moments.cfac_at(k, i).adjoint();
            for (Eigen::Index q = 0; q < A.rows(); ++q) {
                for (int l = 0; l < L; ++l) {
                    const double w = moments.w_norm_sq(l, i);
                    if (!(w > 0.0)) continue;
                    const cplx a = A(q, l) / (std::sqrt(w) * sigma);
                    if (a.real() != 0.0) trip.emplace_back(row, ix.x(l, i), a.real());
                    if (a.imag() != 0.0) trip.emplace_back(row + 1, ix.x(l, i), a.imag());
                }
                row += 2;
            }
        }
        conic::SparseMat F(row, n);
        F.setFromTriplets(trip.begin(), trip.end());
        const double floor = moments.sat_interference(k, state.eta_sn) / noise + 1.0;
        p.add_quadratic_le(std::move(F), {{ix.xi(k), -1.0}}, -floor, "interference_" + sk);

        // Signal: tangent of the UAV term plus satellite term >= tangent of xi / gamma.
        Vec a(L);
        for (int l = 0; l < L; ++l) {
            const double w = moments.w_norm_sq(l, k);
            a(l) = w > 0.0 ? moments.b_at(k, k)(l).real() / (std::sqrt(w) * sigma) : 0.0;
        }
        Vec xk(L);
        for (int l = 0; l < L; ++l) xk(l) = xbar(ix.x(l, k));
        const AffineForm sig = linearize_signal_quadratic(a, xk);
        const double sat = state.eta_sn(k) * moments.sat_signal(k) * moments.sat_signal(k) / noise;
        const Linearization2 frac = linearize_fraction(xbar(ix.xi(k)), xbar(ix.gamma(k)));
        conic::SparseTerms terms;
        for (int l = 0; l < L; ++l)
            if (sig.grad(l) != 0.0) terms.emplace_back(ix.x(l, k), sig.grad(l));
        terms.emplace_back(ix.xi(k), -frac.du);
        terms.emplace_back(ix.gamma(k), -frac.dv);
        const double frac0 = frac.value - frac.du * frac.u0 - frac.dv * frac.v0;
        p.add_affine_ge(std::move(terms), -sat - sig.constant + frac0, "signal_" + sk);

        // Rate: r_k <= tangent of log2(1 + 1/gamma_k) / t.
        const Linearization2 rate = linearize_rate_over_power(xbar(ix.gamma(k)), xbar(ix.t()));
        const double rate0 = rate.value - rate.du * rate.u0 - rate.dv * rate.v0;
        p.add_affine_le({{ix.r(k), 1.0}, {ix.gamma(k), -rate.du}, {ix.t(), -rate.dv}}, rate0, "rate_" + sk);
    }
    return p;
}

ScaIterate extract_iterate(const Vec& x, const ScaIterate& previous, const PrecodingMoments& moments,
                           const ScenarioConfig& config) {
    const SubproblemIndex ix{moments.L, moments.K};
    const double noise = config.noise_power();
    ScaIterate s = previous;
    for (int k = 0; k < moments.K; ++k) {
        for (int l = 0; l < moments.L; ++l) {
            const double w = moments.w_norm_sq(l, k);
            s.eta_sqrt(l, k) = w > 0.0 ? std::max(x(ix.x(l, k)), 0.0) / std::sqrt(w) : 0.0;
        }
        s.r(k) = x(ix.r(k));
        s.gamma(k) = x(ix.gamma(k));
        s.xi(k) = x(ix.xi(k)) * noise;
    }
    s.t = x(ix.t());
    return s;
}

bool sca_converged(double previous, double current, double eps) {
    if (previous == current) return true;
    return std::abs(current - previous) <= eps * std::abs(previous);
}

int sca_stop_index(const std::vector<double>& objectives, double eps) {
    for (std::size_t n = 1; n < objectives.size(); ++n)
        if (sca_converged(objectives[n - 1], objectives[n], eps)) return static_cast<int>(n);
    return -1;
}

ScaResult sca_solve(const ScenarioConfig& config, const PrecodingMoments& moments,
                    const PowerAllocation& init_alloc, const ScaOptions& options) {
    ScaResult res;
    ScaIterate cur = init_state(config, moments, init_alloc);
    PerformanceReport cur_rep = energy_efficiency(cur.allocation(), moments, config);
    res.trace.push_back({cur.objective(), cur_rep.ee, conic::SolveStatus::Optimal, 0.0, 0});

    auto finish = [&](const ScaIterate& s, const PerformanceReport& rep) {
        res.alloc = apply_mode(s.allocation(), config.mode);
        res.report = rep;
        return res;
    };

    if (config.mode == NetworkMode::NtnOnly) {
        res.converged = true;
        return finish(cur, cur_rep);
    }

    for (int n = 1; n <= config.sca_max_iters; ++n) {
        const conic::ConicProblem prob = build_subproblem(cur, moments, config);
        const conic::ConicSolution sol = conic::solve(prob, options.solver);
        ScaTraceEntry entry;
        entry.status = sol.status;
        entry.solver_iterations = sol.iterations;
        entry.expansion_violation = prob.max_violation(state_vector(cur, moments, config.noise_power()));

        if (sol.status == conic::SolveStatus::Infeasible || sol.status == conic::SolveStatus::Unbounded ||
            !sol.x.allFinite()) {
            res.subproblem_failed = true;
            res.diagnostic = std::string("subproblem ") + conic::to_string(sol.status) + " at iteration " +
                             std::to_string(n);
            break;
        }
        const ScaIterate cand = extract_iterate(sol.x, cur, moments, config);

        // Keep only moves that stay truly feasible and do not lower the EE.
        ScaIterate next = tighten(cur, moments, config);
        PerformanceReport next_rep = cur_rep;
        double alpha = 1.0;
        for (int j = 0; j <= options.max_backtracks; ++j, alpha *= 0.5) {
            ScaIterate trial = cur;
            trial.eta_sqrt = cur.eta_sqrt + alpha * (cand.eta_sqrt - cur.eta_sqrt);
            const PowerAllocation ta = trial.allocation();
            if (!check_feasibility(ta, moments, config).ok()) continue;
            const PerformanceReport rep = energy_efficiency(ta, moments, config);
            if (rep.ee < cur_rep.ee) continue;
            next = tighten(std::move(trial), moments, config);
            next_rep = rep;
            entry.step = alpha;
            break;
        }

        const double prev_obj = res.trace.back().objective;
        entry.objective = next.objective();
        entry.ee = next_rep.ee;
        res.trace.push_back(entry);
        cur = std::move(next);
        cur_rep = next_rep;
        if (sca_converged(prev_obj, entry.objective, config.sca_epsilon)) {
            res.converged = true;
            break;
        }
    }
    if (!res.converged && !res.subproblem_failed) {
        res.max_iters_reached = true;
        res.diagnostic = "iteration cap reached";
    }
    return finish(cur, cur_rep);
}

} // namespace cfsat
