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

#include <vector>

#include "cfsat/common.hpp"
#include "cfsat/scenario.hpp"

namespace cfsat {

/// First- and second-order statistics of one Rician link h = mu + R^{1/2} z.
struct LinkStatistics {
    CVec mu;                ///< LoS mean
    CMat R;                 ///< NLoS covariance
    CMat E;                 ///< correlation mu mu^H + R
    double beta_los = 0.0;  ///< linear large-scale fading of the LoS part
    double beta_nlos = 0.0; ///< linear large-scale fading of the NLoS part
    double kappa = 0.0;     ///< Rician factor, linear
    double pr_los = 1.0;
    double aoa = 0.0; ///< nominal angle, radians

    int length() const { return static_cast<int>(mu.size()); }
    double trace() const { return E.trace().real(); }
};

/// Builds statistics from an explicit mean and covariance; E is derived.
LinkStatistics make_link_statistics(CVec mu, CMat R);

/// LoS probability [1 + a exp(-b theta + a b)]^{-1}, theta in degrees.
double los_probability(double theta_deg, double a, double b);

/// Aerial link large-scale fading in dB (d >= 1 m, f_c in GHz).
double uav_pathloss_db(double d, double gain_tx_dbi, double gain_rx_dbi, double f_c_ghz,
                       double shadow_db);

/// Satellite link large-scale fading in dB (d >= 1 m, f_c in GHz).
double sat_pathloss_db(double d, double gain_tx_dbi, double gain_rx_dbi, double f_c_ghz,
                       double shadow_db);

/// Linear Rician factor of a UAV-GU link at distance d (meters).
double rician_factor_uav(double d);

/// Linear Rician factor of a satellite-GU link for an N-element array at distance d (meters).
double rician_factor_sat(int N, double d);

/// Half-wavelength ULA response, entries exp(j pi m sin(phi)), m = 0..len-1.
CVec array_response(int len, double phi);

/// Gauss-Hermite nodes and weights for the weight exp(-x^2).
struct GaussHermiteRule {
    Vec nodes;
    Vec weights;
};
GaussHermiteRule gauss_hermite(int n);

/// Gaussian local scattering covariance around nominal angle phi with
/// angular spread sigma_delta, scaled so every diagonal entry equals `scale`.
CMat scattering_covariance(int len, double phi, double sigma_delta, double scale,
                           int quadrature_nodes = 64);

struct RicianLinkParams {
    int length = 1;
    double beta_db = 0.0;
    double kappa = 1.0;
    double pr_los = 1.0;
    double aoa = 0.0;
    double asd = 0.0;
    int quadrature_nodes = 64;
};

/// mu = sqrt(pr beta kappa/(kappa+1)) a(phi), R = scattering((1-pr) beta/(kappa+1)).
LinkStatistics rician_link(const RicianLinkParams& p);

/// Statistics of the UAV l to GU k link; draws the shadowing term from rng.
LinkStatistics uav_link_statistics(const Geometry& geometry, const ScenarioConfig& config, int l,
                                   int k, Rng& rng);

/// Statistics of the satellite to GU k link; draws the shadowing term from rng.
LinkStatistics sat_link_statistics(const Geometry& geometry, const ScenarioConfig& config, int k,
                                   Rng& rng);

/// Every link of a scenario. UAV links are stored l-major.
struct ChannelSet {
    int L = 0;
    int K = 0;
    std::vector<LinkStatistics> uav;
    std::vector<LinkStatistics> sat;

    const LinkStatistics& uav_link(int l, int k) const {
        return uav[static_cast<std::size_t>(l * K + k)];
    }
    const LinkStatistics& sat_link(int k) const { return sat[static_cast<std::size_t>(k)]; }
};

/// Draws shadowing for all UAV links (l-major), then all satellite links.
ChannelSet build_channels(const Geometry& geometry, const ScenarioConfig& config, Rng& rng);

/// Draws independent realizations mu + F z with F F^H = R.
class ChannelSampler {
public:
    explicit ChannelSampler(const LinkStatistics& stats);

    CVec draw(Rng& rng) const;
    void draw_into(Rng& rng, Eigen::Ref<CVec> out) const;

    const CMat& factor() const { return factor_; }

private:
    CVec mu_;
    CMat factor_;
    bool deterministic_ = false;
};

/// One realization; builds a sampler internally. Prefer ChannelSampler in loops.
CVec sample_channel(const LinkStatistics& stats, Rng& rng);

} // namespace cfsat
