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

#include "cfsat/channel.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "cfsat/linalg.hpp"

namespace cfsat {

LinkStatistics make_link_statistics(CVec mu, CMat R) {
    if (R.rows() != mu.size() || R.cols() != mu.size())
        throw std::invalid_argument("make_link_statistics: dimension mismatch");
    LinkStatistics s;
    s.E = mu * mu.adjoint() + R;
    s.mu = std::move(mu);
    s.R = std::move(R);
    return s;
}

double los_probability(double theta_deg, double a, double b) {
    if (theta_deg < 0.0 || theta_deg > 90.0)
        throw std::invalid_argument("los_probability: theta outside [0, 90] degrees");
    if (a < 0.0 || b < 0.0) throw std::invalid_argument("los_probability: negative constants");
    return 1.0 / (1.0 + a * std::exp(-b * theta_deg + a * b));
}

double uav_pathloss_db(double d, double gain_tx_dbi, double gain_rx_dbi, double f_c_ghz,
                       double shadow_db) {
    if (!(d >= 1.0)) throw std::invalid_argument("uav_pathloss_db: distance below 1 m");
    return gain_tx_dbi + gain_rx_dbi - 8.5 - 38.63 * std::log10(d) - 20.0 * std::log10(f_c_ghz) +
           shadow_db;
}

double sat_pathloss_db(double d, double gain_tx_dbi, double gain_rx_dbi, double f_c_ghz,
                       double shadow_db) {
    if (!(d >= 1.0)) throw std::invalid_argument("sat_pathloss_db: distance below 1 m");
    return gain_tx_dbi + gain_rx_dbi - 32.45 - 20.0 * std::log10(d) - 20.0 * std::log10(f_c_ghz) +
           shadow_db;
}

double rician_factor_uav(double d) {
    if (!(d >= 1.0)) throw std::invalid_argument("rician_factor_uav: distance below 1 m");
    return db_to_linear(15.0 + std::log10(d));
}

double rician_factor_sat(int N, double d) {
    if (N < 1 || !(d >= 1.0)) throw std::invalid_argument("rician_factor_sat: bad arguments");
    return db_to_linear(9.5 + 10.0 * std::log10(static_cast<double>(N)) + 0.5 * std::log10(d));
}

CVec array_response(int len, double phi) {
    if (len < 1) throw std::invalid_argument("array_response: len must be >= 1");
    CVec a(len);
    const double k = kPi * std::sin(phi);
    for (int m = 0; m < len; ++m) a(m) = std::polar(1.0, k * m);
    return a;
}

GaussHermiteRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
    // Golub-Welsch on the symmetric Jacobi matrix of the physicists' Hermite recurrence.
    Mat J = Mat::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        J(i, i - 1) = J(i - 1, i) = std::sqrt(i / 2.0);
    }
    Eigen::SelfAdjointEigenSolver<Mat> eig(J);
    GaussHermiteRule rule;
    rule.nodes = eig.eigenvalues();
    rule.weights = std::sqrt(kPi) * eig.eigenvectors().row(0).transpose().array().square();
    return rule;
}

namespace {

const GaussHermiteRule& cached_rule(int n) {
    static const GaussHermiteRule rule64 = gauss_hermite(64);
    if (n == 64) return rule64;
    thread_local GaussHermiteRule other;
    thread_local int other_n = -1;
    if (other_n != n) {
        other = gauss_hermite(n);
        other_n = n;
    }
    return other;
}

} // namespace

CMat scattering_covariance(int len, double phi, double sigma_delta, double scale,
                           int quadrature_nodes) {
    if (len < 1) throw std::invalid_argument("scattering_covariance: len must be >= 1");
    if (sigma_delta < 0.0 || scale < 0.0)
        throw std::invalid_argument("scattering_covariance: negative spread or scale");

    // Toeplitz: entry (m, n) depends only on m - n.
    CVec first_col(len);
    first_col(0) = 1.0;
    if (sigma_delta == 0.0) {
        for (int d = 1; d < len; ++d) first_col(d) = std::polar(1.0, kPi * d * std::sin(phi));
    } else {
        const GaussHermiteRule& rule = cached_rule(quadrature_nodes);
        const double spread = std::sqrt(2.0) * sigma_delta;
        for (int d = 1; d < len; ++d) {
            cplx acc = 0.0;
            for (Eigen::Index q = 0; q < rule.nodes.size(); ++q) {
                const double delta = spread * rule.nodes(q);
                acc += rule.weights(q) * std::polar(1.0, kPi * d * std::sin(phi + delta));
            }
            first_col(d) = acc / std::sqrt(kPi);
        }
    }

    CMat R(len, len);
    for (int m = 0; m < len; ++m) {
        for (int n = 0; n < len; ++n) {
            R(m, n) = m >= n ? first_col(m - n) : std::conj(first_col(n - m));
        }
    }
    return scale * R;
}

LinkStatistics rician_link(const RicianLinkParams& p) {
    if (p.length < 1) throw std::invalid_argument("rician_link: length must be >= 1");
    if (p.pr_los < 0.0 || p.pr_los > 1.0) throw std::invalid_argument("rician_link: bad pr_los");
    if (!(p.kappa >= 0.0)) throw std::invalid_argument("rician_link: bad kappa");
    const double beta = db_to_linear(p.beta_db);
    const double pr_nlos = 1.0 - p.pr_los;

    CVec mu;
    CMat R;
    if (std::isinf(p.kappa)) {
        mu = std::sqrt(p.pr_los * beta) * array_response(p.length, p.aoa);
        R = CMat::Zero(p.length, p.length);
    } else {
        const double los_share = p.kappa / (p.kappa + 1.0);
        mu = std::sqrt(p.pr_los * beta * los_share) * array_response(p.length, p.aoa);
        R = scattering_covariance(p.length, p.aoa, p.asd, pr_nlos * beta / (p.kappa + 1.0),
                                  p.quadrature_nodes);
    }

    LinkStatistics s = make_link_statistics(std::move(mu), std::move(R));
    s.beta_los = beta;
    s.beta_nlos = beta;
    s.kappa = p.kappa;
    s.pr_los = p.pr_los;
    s.aoa = p.aoa;
    return s;
}

LinkStatistics uav_link_statistics(const Geometry& geometry, const ScenarioConfig& config, int l,
                                   int k, Rng& rng) {
    std::normal_distribution<double> shadow(0.0, config.shadow_std_uav);
    const double z = config.shadow_std_uav > 0.0 ? shadow(rng) : 0.0;
    const double d = geometry.d_lk(l, k);
    RicianLinkParams p;
    p.length = config.M;
    p.beta_db = uav_pathloss_db(d, config.gain_uav, config.gain_gu, config.f_c, z);
    p.kappa = rician_factor_uav(d);
    p.pr_los = los_probability(geometry.theta_lk(l, k), config.los_a, config.los_b);
    p.aoa = geometry.aoa_lk(l, k);
    p.asd = config.asd;
    p.quadrature_nodes = config.quadrature_nodes;
    return rician_link(p);
}

LinkStatistics sat_link_statistics(const Geometry& geometry, const ScenarioConfig& config, int k,
                                   Rng& rng) {
    std::normal_distribution<double> shadow(0.0, config.shadow_std_sat);
    const double z = config.shadow_std_sat > 0.0 ? shadow(rng) : 0.0;
    const double d = geometry.d_k(k);
    RicianLinkParams p;
    p.length = config.N;
    p.beta_db = sat_pathloss_db(d, config.gain_sat, config.gain_gu, config.f_c, z);
    p.kappa = rician_factor_sat(config.N, d);
    p.pr_los = los_probability(geometry.theta_k(k), config.los_a, config.los_b);
    p.aoa = geometry.aoa_k(k);
    p.asd = config.asd_sat;
    p.quadrature_nodes = config.quadrature_nodes;
    return rician_link(p);
}

ChannelSet build_channels(const Geometry& geometry, const ScenarioConfig& config, Rng& rng) {
    ChannelSet set;
    set.L = config.L;
    set.K = config.K;
    set.uav.reserve(static_cast<std::size_t>(config.L * config.K));
    for (int l = 0; l < config.L; ++l)
        for (int k = 0; k < config.K; ++k)
            set.uav.push_back(uav_link_statistics(geometry, config, l, k, rng));
    set.sat.reserve(static_cast<std::size_t>(config.K));
    for (int k = 0; k < config.K; ++k) set.sat.push_back(sat_link_statistics(geometry, config, k, rng));
    return set;
}

ChannelSampler::ChannelSampler(const LinkStatistics& stats) : mu_(stats.mu) {
    if (stats.R.size() == 0 || stats.R.cwiseAbs().maxCoeff() == 0.0) {
        deterministic_ = true;
        return;
    }
    factor_ = psd_factor(stats.R);
}

void ChannelSampler::draw_into(Rng& rng, Eigen::Ref<CVec> out) const {
    if (deterministic_) {
        out = mu_;
        return;
    }
    const Eigen::Index n = factor_.cols();
    CVec z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = draw_cn(rng);
    out = mu_ + factor_ * z;
}

CVec ChannelSampler::draw(Rng& rng) const {
    CVec h(mu_.size());
    draw_into(rng, h);
    return h;
}

CVec sample_channel(const LinkStatistics& stats, Rng& rng) {
    return ChannelSampler(stats).draw(rng);
}

} // namespace cfsat
