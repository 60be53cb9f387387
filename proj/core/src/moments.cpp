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

#include "cfsat/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace cfsat {

double mean_psi_same(const LinkStatistics& link) { return link.E.trace().real(); }

cplx mean_psi_cross(const LinkStatistics& link_i, const LinkStatistics& link_k) {
    return link_i.mu.dot(link_k.mu); // Eigen's dot conjugates the left operand
}

double fourth_moment_norm(const LinkStatistics& link, MomentMode mode) {
    if (mode == MomentMode::Exact) {
        const double tr = link.E.trace().real();
        const double tr_sq = (link.E * link.E).trace().real();
        const double mu4 = std::pow(link.mu.squaredNorm(), 2);
        return tr * tr + tr_sq - mu4;
    }
    // Element-wise: sum_m E|h_m|^4 + sum_{m != m'} E|h_m|^2 E|h_m'|^2.
    const Eigen::Index n = link.mu.size();
    double sum_fourth = 0.0;
    double sum_second = 0.0;
    double sum_second_sq = 0.0;
    for (Eigen::Index m = 0; m < n; ++m) {
        const double mean_sq = std::norm(link.mu(m));
        const double var = link.R(m, m).real();
        sum_fourth += mean_sq * mean_sq + 4.0 * mean_sq * var + 2.0 * var * var;
        const double second = mean_sq + var;
        sum_second += second;
        sum_second_sq += second * second;
    }
    return sum_fourth + (sum_second * sum_second - sum_second_sq);
}

namespace {

// E||h||^4 - (E||h||^2)^2, summed so that deterministic links give exactly 0.
double norm_variance(const LinkStatistics& link, MomentMode mode) {
    if (mode == MomentMode::Exact) {
        const double tr_r2 = (link.R * link.R).trace().real();
        const double mrm = link.mu.dot(link.R * link.mu).real();
        return std::max(tr_r2 + 2.0 * mrm, 0.0);
    }
    double acc = 0.0;
    for (Eigen::Index m = 0; m < link.mu.size(); ++m) {
        const double var = link.R(m, m).real();
        acc += 2.0 * std::norm(link.mu(m)) * var + var * var;
    }
    return std::max(acc, 0.0);
}

} // namespace

double second_moment_same_offdiag(const LinkStatistics& link_l, const LinkStatistics& link_lp) {
    return link_l.E.trace().real() * link_lp.E.trace().real();
}

double second_moment_cross_diag(const LinkStatistics& link_i, const LinkStatistics& link_k) {
    // tr(A B) for Hermitian A, B is sum_ij A_ij conj(B_ij).
    return (link_i.E.array() * link_k.E.conjugate().array()).sum().real();
}

cplx second_moment_cross_offdiag(const LinkStatistics& li, const LinkStatistics& lk,
                                 const LinkStatistics& lpi, const LinkStatistics& lpk) {
    return mean_psi_cross(li, lk) * mean_psi_cross(lpk, lpi);
}

CMat PrecodingMoments::second_moment(int k, int i) const {
    if (k != i) return csq_at(k, i);
    const CVec& bk = b_at(k, k);
    return csq_at(k, k) + bk * bk.adjoint();
}

Vec PrecodingMoments::signal_gain(int k) const { return b_at(k, k).real(); }

double PrecodingMoments::sat_interference(int k, const Vec& eta_sn) const {
    double acc = eta_sn(k) * (sat_fourth(k) - sat_signal(k) * sat_signal(k));
    for (int i = 0; i < K; ++i) {
        if (i != k) acc += eta_sn(i) * sat_cross(k, i);
    }
    return acc;
}

PrecodingMoments assemble_moments(const ChannelSet& channels, MomentMode mode) {
    const int L = channels.L;
    const int K = channels.K;
    if (static_cast<int>(channels.uav.size()) != L * K || static_cast<int>(channels.sat.size()) != K)
        throw std::invalid_argument("assemble_moments: incomplete channel set");

    PrecodingMoments pm;
    pm.L = L;
    pm.K = K;
    pm.b.resize(static_cast<std::size_t>(K * K));
    pm.Csq.resize(static_cast<std::size_t>(K * K));
    pm.Cfac.resize(static_cast<std::size_t>(K * K));

    pm.w_norm_sq.resize(L, K);
    for (int l = 0; l < L; ++l) {
        for (int k = 0; k < K; ++k) {
            pm.w_norm_sq(l, k) = mean_psi_same(channels.uav_link(l, k));
        }
    }

    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < K; ++i) {
            CVec b(L);
            CMat C(L, L);
            if (i == k) {
                for (int l = 0; l < L; ++l) b(l) = pm.w_norm_sq(l, k);
                // Off-diagonal second moments factor into products of means and
                // cancel against b b^H; only the per-UAV variance survives.
                C.setZero();
                for (int l = 0; l < L; ++l) {
                    C(l, l) = norm_variance(channels.uav_link(l, k), mode);
                }
            } else {
                for (int l = 0; l < L; ++l)
                    b(l) = mean_psi_cross(channels.uav_link(l, i), channels.uav_link(l, k));
                for (int l = 0; l < L; ++l) {
                    for (int lp = 0; lp < L; ++lp) {
                        if (l == lp) {
                            C(l, l) = second_moment_cross_diag(channels.uav_link(l, i),
                                                               channels.uav_link(l, k));
                        } else {
                            C(l, lp) = second_moment_cross_offdiag(
                                channels.uav_link(l, i), channels.uav_link(l, k),
                                channels.uav_link(lp, i), channels.uav_link(lp, k));
                        }
                    }
                }
            }
            const std::size_t idx = pm.index(k, i);
            pm.Cfac[idx] = psd_factor(C);
            pm.b[idx] = std::move(b);
            pm.Csq[idx] = std::move(C);
        }
    }

    pm.sat_signal.resize(K);
    pm.sat_fourth.resize(K);
    pm.sat_cross = Mat::Zero(K, K);
    for (int k = 0; k < K; ++k) {
        pm.sat_signal(k) = mean_psi_same(channels.sat_link(k));
        pm.sat_fourth(k) = fourth_moment_norm(channels.sat_link(k), mode);
    }
    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < K; ++i) {
            if (i != k)
                pm.sat_cross(k, i) = second_moment_cross_diag(channels.sat_link(i), channels.sat_link(k));
        }
    }
    return pm;
}

} // namespace cfsat
