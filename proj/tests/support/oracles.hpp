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

// Independent reference implementations shared by the unit tests and the
// acceptance runner. Nothing here calls into the code it is used to check.

#include <algorithm>
#include <cmath>
#include <vector>

#include "cfsat/channel.hpp"
#include "cfsat/conic.hpp"
#include "cfsat/moments.hpp"
#include "cfsat/performance.hpp"

namespace cfsat::testing {

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline CVec random_cvec(Rng& rng, int n, double scale) {
    CVec v(n);
    for (int i = 0; i < n; ++i) v(i) = scale * cplx(uniform(rng, -1, 1), uniform(rng, -1, 1));
    return v;
}

/// Random correlated Rician-like link: mean of norm^2 ~ scale, R = A A^H.
inline LinkStatistics random_link(Rng& rng, int len, double scale, bool with_mean = true) {
    CMat A(len, len);
    for (int j = 0; j < len; ++j) A.col(j) = random_cvec(rng, len, std::sqrt(scale / (2.0 * len)));
    CVec mu = with_mean ? random_cvec(rng, len, std::sqrt(scale / (2.0 * len))) : CVec::Zero(len);
    return make_link_statistics(std::move(mu), A * A.adjoint());
}

inline ChannelSet random_channels(Rng& rng, int L, int K, int M, int N) {
    ChannelSet cs;
    cs.L = L;
    cs.K = K;
    for (int i = 0; i < L * K; ++i) cs.uav.push_back(random_link(rng, M, uniform(rng, 0.5, 2.0)));
    for (int k = 0; k < K; ++k) cs.sat.push_back(random_link(rng, N, uniform(rng, 0.5, 2.0)));
    return cs;
}

/// SINR written out term by term from the link correlations, without the
/// moment tables' factors.
inline double direct_sinr(int k, const PowerAllocation& a, const ChannelSet& cs, double noise) {
    const int L = cs.L;
    const int K = cs.K;
    auto tr = [](const CMat& E) { return E.trace().real(); };
    auto fourth = [&](const LinkStatistics& s) {
        const double t = tr(s.E);
        const double m2 = s.mu.squaredNorm();
        return t * t + (s.E * s.E).trace().real() - m2 * m2;
    };
    double signal = 0.0;
    for (int l = 0; l < L; ++l) signal += std::sqrt(a.eta_ap(l, k)) * tr(cs.uav_link(l, k).E);
    const double gk = tr(cs.sat_link(k).E);
    const double num = a.eta_sn(k) * gk * gk + signal * signal;

    double den = noise;
    den += a.eta_sn(k) * (fourth(cs.sat_link(k)) - gk * gk);
    for (int i = 0; i < K; ++i) {
        if (i == k) continue;
        den += a.eta_sn(i) * (cs.sat_link(k).E * cs.sat_link(i).E).trace().real();
    }
    for (int i = 0; i < K; ++i) {
        // E|sum_l sqrt(eta_li) h_lk^H h_li|^2 minus |mean|^2 when i == k
        double total = 0.0;
        for (int l = 0; l < L; ++l) {
            for (int lp = 0; lp < L; ++lp) {
                const double w = std::sqrt(a.eta_ap(l, i) * a.eta_ap(lp, i));
                const auto& lk = cs.uav_link(l, k);
                const auto& li = cs.uav_link(l, i);
                const auto& lpk = cs.uav_link(lp, k);
                const auto& lpi = cs.uav_link(lp, i);
                double term;
                if (i == k) {
                    term = (l == lp) ? fourth(lk) : tr(lk.E) * tr(lpk.E);
                } else if (l == lp) {
                    term = (li.E * lk.E).trace().real();
                } else {
                    term = std::real(li.mu.dot(lk.mu) * lpk.mu.dot(lpi.mu));
                }
                total += w * term;
            }
        }
        if (i == k) total -= signal * signal;
        den += total;
    }
    return num / den;
}

/// Convex program  max c.x  s.t.  x' Q_j x + a_j.x <= r_j.
struct QcqpInstance {
    Vec c;
    std::vector<Mat> Q;
    std::vector<Vec> a;
    Vec r;
};

/// Random instance with x = 0 strictly feasible and every Q_j positive definite.
inline QcqpInstance random_qcqp(Rng& rng, int n, int m_quad, int m_lin) {
    QcqpInstance p;
    p.c = Vec::NullaryExpr(n, [&] { return uniform(rng, -1, 1); });
    const int m = m_quad + m_lin;
    p.r.resize(m);
    for (int j = 0; j < m; ++j) {
        Mat Q = Mat::Zero(n, n);
        if (j < m_quad) {
            const Mat A = Mat::NullaryExpr(n, n, [&] { return uniform(rng, -1, 1); });
            Q = A * A.transpose() + 0.1 * Mat::Identity(n, n);
        }
        p.Q.push_back(Q);
        p.a.push_back(Vec::NullaryExpr(n, [&] { return uniform(rng, -1, 1); }));
        p.r(j) = uniform(rng, 0.5, 2.0);
    }
    return p;
}

inline conic::ConicProblem to_conic(const QcqpInstance& p) {
    conic::ConicProblem cp;
    const int n = static_cast<int>(p.c.size());
    std::vector<int> vars;
    for (int i = 0; i < n; ++i) vars.push_back(cp.add_variable("x" + std::to_string(i)));
    conic::SparseTerms obj;
    for (int i = 0; i < n; ++i) obj.emplace_back(vars[i], p.c(i));
    cp.set_objective(conic::Sense::Maximize, obj);
    for (std::size_t j = 0; j < p.Q.size(); ++j) {
        conic::SparseTerms lin;
        for (int i = 0; i < n; ++i) lin.emplace_back(vars[i], p.a[j](i));
        if (p.Q[j].norm() > 0.0) {
            cp.add_quadratic_le(p.Q[j], vars, lin, p.r(j), "q" + std::to_string(j));
        } else {
            cp.add_affine_le(lin, p.r(j), "a" + std::to_string(j));
        }
    }
    return cp;
}

/// Optimal value by projected gradient on the Lagrange dual (lambda >= 0).
/// Needs at least one quadratic constraint; strong duality holds because
/// x = 0 is strictly feasible.
inline double dual_projected_gradient(const QcqpInstance& p, int max_iter = 200000) {
    const int m = static_cast<int>(p.r.size());
    const int n = static_cast<int>(p.c.size());
    auto primal = [&](const Vec& lam, Vec& x) {
        Mat Q = Mat::Zero(n, n);
        Vec a = Vec::Zero(n);
        for (int j = 0; j < m; ++j) {
            Q += lam(j) * p.Q[j];
            a += lam(j) * p.a[j];
        }
        Eigen::LDLT<Mat> f(Q);
        if (f.info() != Eigen::Success || f.vectorD().minCoeff() <= 0.0) return false;
        x = f.solve(p.c - a) / 2.0;
        return x.allFinite();
    };
    auto dual = [&](const Vec& lam, Vec& x, double& g) {
        if (!primal(lam, x)) return false;
        g = p.c.dot(x) + lam.dot(p.r);
        for (int j = 0; j < m; ++j) g -= lam(j) * (x.dot(p.Q[j] * x) + p.a[j].dot(x));
        return std::isfinite(g);
    };
    Vec lam = Vec::Ones(m);
    Vec x;
    double g = 0.0;
    dual(lam, x, g);
    double step = 1.0;
    for (int it = 0; it < max_iter; ++it) {
        Vec grad(m);
        for (int j = 0; j < m; ++j) grad(j) = p.r(j) - x.dot(p.Q[j] * x) - p.a[j].dot(x);
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            const Vec cand = (lam - step * grad).cwiseMax(0.0);
            Vec xc;
            double gc;
            const Vec d = cand - lam;
            if (dual(cand, xc, gc) && gc <= g + grad.dot(d) + d.squaredNorm() / (2.0 * step)) {
                const double change = g - gc;
                lam = cand;
                x = xc;
                g = gc;
                moved = true;
                step *= 2.0;
                if (d.norm() <= 1e-15 * (1.0 + lam.norm()) && change <= 1e-16 * std::abs(g)) return g;
                break;
            }
            step /= 2.0;
        }
        if (!moved) break;
    }
    return g;
}

} // namespace cfsat::testing
