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

#include "cfsat/scenario.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cfsat {

std::string_view to_string(NetworkMode mode) {
    switch (mode) {
    case NetworkMode::NtnTn: return "NTN_TN";
    case NetworkMode::TnOnly: return "TN_ONLY";
    case NetworkMode::NtnOnly: return "NTN_ONLY";
    }
    return "?";
}

NetworkMode parse_network_mode(std::string_view text) {
    if (text == "NTN_TN") return NetworkMode::NtnTn;
    if (text == "TN_ONLY") return NetworkMode::TnOnly;
    if (text == "NTN_ONLY") return NetworkMode::NtnOnly;
    throw std::invalid_argument("unknown network mode: " + std::string(text));
}

std::string_view to_string(MomentMode mode) {
    return mode == MomentMode::Exact ? "exact" : "paper";
}

MomentMode parse_moment_mode(std::string_view text) {
    if (text == "exact") return MomentMode::Exact;
    if (text == "paper") return MomentMode::PaperElementwise;
    throw std::invalid_argument("unknown moment mode: " + std::string(text));
}

void ScenarioConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("invalid scenario config: ") + what);
    };
    require(L >= 1 && K >= 1 && M >= 1 && N >= 1, "L, K, M, N must be >= 1");
    require(area_side > 0.0, "area_side must be positive");
    require(uav_altitude > 0.0 && sat_altitude > 0.0, "altitudes must be positive");
    require(P_ap_dl >= 0.0 && P_sn_dl >= 0.0 && P_dsp >= 0.0 && P_hov >= 0.0,
            "powers must be nonnegative");
    require(amp_efficiency > 0.0 && amp_efficiency <= 1.0, "amp_efficiency must lie in (0, 1]");
    require(f_c > 0.0 && bandwidth > 0.0, "f_c and bandwidth must be positive");
    require(asd >= 0.0 && asd_sat >= 0.0, "angular spreads must be nonnegative");
    require(shadow_std_uav >= 0.0 && shadow_std_sat >= 0.0, "shadowing std must be nonnegative");
    require(los_a > 0.0 && los_b > 0.0, "los_a and los_b must be positive");
    require(!se_min.empty(), "se_min must not be empty");
    require(se_min.size() == 1 || static_cast<int>(se_min.size()) == K,
            "se_min must hold one value or K values");
    for (double s : se_min) require(s >= 0.0, "se_min must be nonnegative");
    require(sca_epsilon > 0.0, "sca_epsilon must be positive");
    require(sca_max_iters >= 1, "sca_max_iters must be >= 1");
    require(rs_grid >= 2, "rs_grid must be >= 2");
    require(mc_trials >= 1, "mc_trials must be >= 1");
    require(quadrature_nodes >= 2, "quadrature_nodes must be >= 2");
}

double ScenarioConfig::se_min_for(int k) const {
    return se_min.size() == 1 ? se_min.front() : se_min.at(static_cast<std::size_t>(k));
}

double ScenarioConfig::noise_power() const {
    const double dbm = -174.0 + 10.0 * std::log10(bandwidth) + noise_figure_gu;
    return std::pow(10.0, dbm / 10.0) * 1e-3;
}

std::pair<int, int> grid_shape(int L) {
    if (L < 1) throw std::invalid_argument("grid_shape: L must be >= 1");
    int rows = static_cast<int>(std::sqrt(static_cast<double>(L)));
    while (rows > 1 && L % rows != 0) --rows;
    return {rows, L / rows};
}

double elevation_angle(const Eigen::Vector3d& rx, const Eigen::Vector3d& tx) {
    const double d = (tx - rx).norm();
    if (!(d > 0.0)) throw std::invalid_argument("elevation_angle: coincident points");
    const double dz = tx.z() - rx.z();
    if (dz < 0.0) throw std::invalid_argument("elevation_angle: transmitter below receiver");
    return rad_to_deg(std::asin(std::min(1.0, dz / d)));
}

double nominal_angle(const Eigen::Vector3d& rx, const Eigen::Vector3d& tx) {
    return std::atan2(rx.y() - tx.y(), rx.x() - tx.x());
}

Geometry build_geometry(const ScenarioConfig& config, Rng& rng) {
    if (!(config.area_side > 0.0) || !(config.uav_altitude > 0.0) || !(config.sat_altitude > 0.0))
        throw std::invalid_argument("build_geometry: zero area or altitude");
    config.validate();

    const int L = config.L;
    const int K = config.K;
    const double side = config.area_side;

    Geometry g;
    const auto [rows, cols] = grid_shape(L);
    g.uav_positions.reserve(static_cast<std::size_t>(L));
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            g.uav_positions.emplace_back((c + 0.5) * side / cols, (r + 0.5) * side / rows,
                                         config.uav_altitude);
        }
    }

    std::uniform_real_distribution<double> coord(0.0, side);
    g.gu_positions.reserve(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        const double x = coord(rng);
        const double y = coord(rng);
        g.gu_positions.emplace_back(x, y, 0.0);
    }
    g.sat_position = Eigen::Vector3d(side / 2.0, side / 2.0, config.sat_altitude);

    g.d_lk.resize(L, K);
    g.theta_lk.resize(L, K);
    g.aoa_lk.resize(L, K);
    for (int l = 0; l < L; ++l) {
        for (int k = 0; k < K; ++k) {
            const auto& uav = g.uav_positions[static_cast<std::size_t>(l)];
            const auto& gu = g.gu_positions[static_cast<std::size_t>(k)];
            g.d_lk(l, k) = (uav - gu).norm();
            g.theta_lk(l, k) = elevation_angle(gu, uav);
            g.aoa_lk(l, k) = nominal_angle(gu, uav);
        }
    }
    g.d_k.resize(K);
    g.theta_k.resize(K);
    g.aoa_k.resize(K);
    for (int k = 0; k < K; ++k) {
        const auto& gu = g.gu_positions[static_cast<std::size_t>(k)];
        g.d_k(k) = (g.sat_position - gu).norm();
        g.theta_k(k) = elevation_angle(gu, g.sat_position);
        g.aoa_k(k) = nominal_angle(gu, g.sat_position);
    }
    return g;
}

} // namespace cfsat
