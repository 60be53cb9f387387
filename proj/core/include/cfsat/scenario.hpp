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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cfsat/common.hpp"

namespace cfsat {

enum class NetworkMode { NtnTn, TnOnly, NtnOnly };

enum class MomentMode {
    Exact,           ///< exact complex-Gaussian fourth moment
    PaperElementwise ///< element-wise fourth moment, exact only for diagonal R
};

std::string_view to_string(NetworkMode mode);
NetworkMode parse_network_mode(std::string_view text);
std::string_view to_string(MomentMode mode);
MomentMode parse_moment_mode(std::string_view text);

/// Scenario parameters. Field names double as configuration-file keys.
///
/// Angles are in radians, distances in meters, powers in watts, the carrier
/// frequency in GHz. Defaults correspond to the `desk` preset.
struct ScenarioConfig {
    double area_side = 1250.0;
    int L = 6; ///< UAVs
    int K = 4; ///< ground users
    int M = 2; ///< antennas per UAV
    int N = 8; ///< satellite antennas
    double uav_altitude = 50.0;
    double sat_altitude = 550e3;
    double P_ap_dl = 1.0;
    double P_sn_dl = 10.0;
    double P_dsp = 0.1;
    double P_hov = 50.0;
    double amp_efficiency = 0.8;
    double f_c = 6.0;
    double bandwidth = 20e6;
    double noise_figure_gu = 1.2;
    double asd = 10.0 * kPi / 180.0;
    double asd_sat = 2.0 * kPi / 180.0;
    double shadow_std_uav = 6.0;
    double shadow_std_sat = 4.0;
    double los_a = 5.0;
    double los_b = 0.05;
    double gain_uav = 10.0; ///< dBi
    double gain_gu = 10.0;  ///< dBi
    double gain_sat = 30.0; ///< dBi
    /// Per-GU QoS floor; a single entry applies to every GU.
    std::vector<double> se_min{0.2};
    double fpa_exponent = -1.0;
    double sca_epsilon = 1e-3;
    int sca_max_iters = 100;
    int rs_grid = 100;
    int mc_trials = 20000;
    int quadrature_nodes = 64;
    std::uint64_t rng_seed = 1;
    NetworkMode mode = NetworkMode::NtnTn;
    MomentMode moment_mode = MomentMode::Exact;

    /// Throws std::invalid_argument on the first violated invariant.
    void validate() const;

    double se_min_for(int k) const;

    /// Thermal noise power at a GU receiver in watts (-174 dBm/Hz + 10log10(B) + NF).
    double noise_power() const;

    /// Static UAV-layer consumption L(M P_dsp + P_hov).
    double static_power() const { return L * (M * P_dsp + P_hov); }
};

struct Geometry {
    std::vector<Eigen::Vector3d> uav_positions;
    std::vector<Eigen::Vector3d> gu_positions;
    Eigen::Vector3d sat_position = Eigen::Vector3d::Zero();
    Mat d_lk;     ///< L x K, meters
    Vec d_k;      ///< K, meters
    Mat theta_lk; ///< L x K elevation, degrees
    Vec theta_k;  ///< K elevation, degrees
    Mat aoa_lk;   ///< L x K nominal angle, radians
    Vec aoa_k;    ///< K nominal angle, radians
};

/// Rows x columns of the UAV grid: r <= c, r * c = L, c - r minimal.
std::pair<int, int> grid_shape(int L);

/// UAVs on a deterministic grid, GUs uniform over the square, satellite above the center.
Geometry build_geometry(const ScenarioConfig& config, Rng& rng);

/// Elevation of the transmitter seen from the receiver, in degrees.
double elevation_angle(const Eigen::Vector3d& rx, const Eigen::Vector3d& tx);

/// Horizontal bearing from transmitter to receiver, in radians, (-pi, pi].
/// Used as the nominal angle in the array response. A receiver straight
/// below the transmitter gets 0.
double nominal_angle(const Eigen::Vector3d& rx, const Eigen::Vector3d& tx);

} // namespace cfsat
