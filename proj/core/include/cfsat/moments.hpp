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

#include "cfsat/channel.hpp"
#include "cfsat/common.hpp"
#include "cfsat/linalg.hpp"
#include "cfsat/scenario.hpp"

namespace cfsat {

// Closed-form expectations under maximum-ratio precoding (w = h for every
// UAV link, w = g for the satellite). psi_{k,i} collects, over UAVs l, the
// conjugated effective gain h_{l,k}^H h_{l,i} of GU i's stream at GU k.

/// E{h^H h} = tr(E).
double mean_psi_same(const LinkStatistics& link);

/// E{h_i^H h_k} = mu_i^H mu_k for independent links sharing one UAV.
cplx mean_psi_cross(const LinkStatistics& link_i, const LinkStatistics& link_k);

/// E{||h||^4}.
double fourth_moment_norm(const LinkStatistics& link, MomentMode mode);

/// E{||h_{l,k}||^2 ||h_{l',k}||^2} = tr(E_{l,k}) tr(E_{l',k}) for l != l'.
double second_moment_same_offdiag(const LinkStatistics& link_l, const LinkStatistics& link_lp);

/// E{|h_i^H h_k|^2} = tr(E_i E_k).
double second_moment_cross_diag(const LinkStatistics& link_i, const LinkStatistics& link_k);

/// (mu_{l,i}^H mu_{l,k}) (mu_{l',k}^H mu_{l',i}) for i != k, l != l'.
cplx second_moment_cross_offdiag(const LinkStatistics& li, const LinkStatistics& lk,
                                 const LinkStatistics& lpi, const LinkStatistics& lpk);

struct PrecodingMoments {
    int L = 0;
    int K = 0;
    std::vector<CVec> b;    ///< [k*K + i], length L
    std::vector<CMat> Csq;  ///< [k*K + i], L x L Hermitian PSD
    std::vector<CMat> Cfac; ///< [k*K + i], Cfac Cfac^H = Csq
    Mat w_norm_sq;          ///< L x K, E||w_{l,i}||^2 = tr(E_{l,i})
    Vec sat_signal;         ///< K, E{g_k^H g_k} = tr(E^g_k)
    Vec sat_fourth;         ///< K, E||g_k||^4
    Mat sat_cross;          ///< K x K, E|g_k^H g_i|^2 off the diagonal, zero on it

    const CVec& b_at(int k, int i) const { return b[index(k, i)]; }
    const CMat& csq_at(int k, int i) const { return Csq[index(k, i)]; }
    const CMat& cfac_at(int k, int i) const { return Cfac[index(k, i)]; }

    /// Raw second moment E{psi_{k,i} psi_{k,i}^H}.
    CMat second_moment(int k, int i) const;

    /// b_{k,k} as a real vector (its entries are traces).
    Vec signal_gain(int k) const;

    /// Satellite interference B_k for satellite coefficients eta_sn.
    double sat_interference(int k, const Vec& eta_sn) const;

    /// E||w^SN_i||^2, the satellite budget weight of GU i.
    double sat_precoder_norm(int i) const { return sat_signal(i); }

    std::size_t index(int k, int i) const { return static_cast<std::size_t>(k * K + i); }
};

/// Assembles every table entry; Cfac via psd_factor.
PrecodingMoments assemble_moments(const ChannelSet& channels, MomentMode mode);

} // namespace cfsat
