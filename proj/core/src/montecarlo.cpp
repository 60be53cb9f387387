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

#include "cfsat/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cfsat/parallel.hpp"

namespace cfsat {

namespace {

// Running mean and centered sum of squares, merged pairwise across chunks.
struct Welford {
    long n = 0;
    Vec mean;
    Vec m2;

    explicit Welford(Eigen::Index dim) : mean(Vec::Zero(dim)), m2(Vec::Zero(dim)) {}

    void add(const Vec& x) {
        ++n;
        const Vec delta = x - mean;
        mean += delta / static_cast<double>(n);
        m2.array() += delta.array() * (x - mean).array();
    }

    void merge(const Welford& o) {
        if (o.n == 0) return;
        const long total = n + o.n;
        const Vec delta = o.mean - mean;
        mean += delta * (static_cast<double>(o.n) / total);
        m2 += o.m2 + delta.cwiseAbs2() * (static_cast<double>(n) * o.n / total);
        n = total;
    }

    Vec standard_error() const {
        if (n < 2) return Vec::Zero(mean.size());
        return (m2.cwiseMax(0.0) / (static_cast<double>(n - 1) * n)).cwiseSqrt();
    }
};

struct Samplers {
    std::vector<ChannelSampler> uav;
    std::vector<ChannelSampler> sat;

    explicit Samplers(const ChannelSet& ch) {
        uav.reserve(ch.uav.size());
        for (const auto& s : ch.uav) uav.emplace_back(s);
        sat.reserve(ch.sat.size());
        for (const auto& s : ch.sat) sat.emplace_back(s);
    }
};

struct Draw {
    std::vector<CVec> h; // l-major
    std::vector<CVec> g;
};

void draw_all(const ChannelSet& ch, const Samplers& smp, Rng& rng, Draw& d) {
    d.h.resize(ch.uav.size());
    d.g.resize(ch.sat.size());
    for (std::size_t j = 0; j < ch.uav.size(); ++j) {
        d.h[j].resize(ch.uav[j].length());
        smp.uav[j].draw_into(rng, d.h[j]);
    }
    for (std::size_t j = 0; j < ch.sat.size(); ++j) {
        d.g[j].resize(ch.sat[j].length());
        smp.sat[j].draw_into(rng, d.g[j]);
    }
}

int chunk_count(long trials) { return static_cast<int>((trials + kTrialsPerChunk - 1) / kTrialsPerChunk); }

long chunk_size(long trials, int c) {
    return std::min<long>(kTrialsPerChunk, trials - static_cast<long>(c) * kTrialsPerChunk);
}

// Flat layout of one trial's real-valued observations.
struct MomentLayout {
    int L, K;
    int block() const { return 2 * L + 2 * L * L; }
    int psi(int k, int i) const { return (k * K + i) * block(); }
    int w() const { return K * K * block(); }
    int sat_signal() const { return w() + L * K; }
    int sat_fourth() const { return sat_signal() + K; }
    int sat_cross() const { return sat_fourth() + K; }
    int dim() const { return sat_cross() + K * K; }
};

} // namespace

MomentEstimate estimate_moments(const ChannelSet& channels, long trials, std::uint64_t seed) {
    if (trials < 2) throw std::invalid_argument("estimate_moments: need at least two trials");
    const int L = channels.L;
    const int K = channels.K;
    const MomentLayout lay{L, K};
    const Samplers smp(channels);
    const int chunks = chunk_count(trials);
    std::vector<Welford> acc(static_cast<std::size_t>(chunks), Welford(lay.dim()));

    parallel_for(chunks, [&](int c) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
        Draw d;
        Vec x(lay.dim());
        CVec psi(L);
        for (long t = 0; t < chunk_size(trials, c); ++t) {
            draw_all(channels, smp, rng, d);
            for (int k = 0; k < K; ++k) {
                for (int i = 0; i < K; ++i) {
                    for (int l = 0; l < L; ++l) {
                        const CVec& hi = d.h[static_cast<std::size_t>(l * K + i)];
                        const CVec& hk = d.h[static_cast<std::size_t>(l * K + k)];
                        psi(l) = hi.dot(hk);
                    }
                    const int o = lay.psi(k, i);
                    x.segment(o, L) = psi.real();
                    x.segment(o + L, L) = psi.imag();
                    const CMat outer = psi * psi.adjoint();
                    x.segment(o + 2 * L, L * L) = outer.real().reshaped();
                    x.segment(o + 2 * L + L * L, L * L) = outer.imag().reshaped();
                }
            }
            for (int k = 0; k < K; ++k) {
                for (int l = 0; l < L; ++l) x(lay.w() + k * L + l) = d.h[static_cast<std::size_t>(l * K + k)].squaredNorm();
                const double gg = d.g[static_cast<std::size_t>(k)].squaredNorm();
                x(lay.sat_signal() + k) = gg;
                x(lay.sat_fourth() + k) = gg * gg;
                for (int i = 0; i < K; ++i) {
                    x(lay.sat_cross() + k * K + i) =
                        i == k ? 0.0 : std::norm(d.g[static_cast<std::size_t>(k)].dot(d.g[static_cast<std::size_t>(i)]));
                }
            }
            acc[static_cast<std::size_t>(c)].add(x);
        }
    });

    Welford total(lay.dim());
    for (const auto& a : acc) total.merge(a);
    const Vec& m = total.mean;
    const Vec se = total.standard_error();

    MomentEstimate est;
    est.L = L;
    est.K = K;
    est.trials = trials;
    est.seed = seed;
    const cplx I(0.0, 1.0);
    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < K; ++i) {
            const int o = lay.psi(k, i);
            est.b.push_back(m.segment(o, L).cast<cplx>() + I * m.segment(o + L, L).cast<cplx>());
            est.b_se_re.push_back(se.segment(o, L));
            est.b_se_im.push_back(se.segment(o + L, L));
            const Mat re = m.segment(o + 2 * L, L * L).reshaped(L, L);
            const Mat im = m.segment(o + 2 * L + L * L, L * L).reshaped(L, L);
            est.raw2.push_back(re.cast<cplx>() + I * im.cast<cplx>());
            est.raw2_se_re.push_back(se.segment(o + 2 * L, L * L).reshaped(L, L));
            est.raw2_se_im.push_back(se.segment(o + 2 * L + L * L, L * L).reshaped(L, L));
        }
    }
    est.w_norm_sq = m.segment(lay.w(), L * K).reshaped(L, K);
    est.w_norm_sq_se = se.segment(lay.w(), L * K).reshaped(L, K);
    est.sat_signal = m.segment(lay.sat_signal(), K);
    est.sat_signal_se = se.segment(lay.sat_signal(), K);
    est.sat_fourth = m.segment(lay.sat_fourth(), K);
    est.sat_fourth_se = se.segment(lay.sat_fourth(), K);
    // Row k holds E|g_k^H g_i|^2.
    est.sat_cross = m.segment(lay.sat_cross(), K * K).reshaped(K, K).transpose();
    est.sat_cross_se = se.segment(lay.sat_cross(), K * K).reshaped(K, K).transpose();
    return est;
}

namespace {

void tally(ZScoreSummary& z, double est, double cf, double se) {
    const double diff = std::abs(est - cf);
    double score = 0.0;
    if (se > 0.0) {
        score = diff / se;
    } else if (diff > 1e-9 * std::max({std::abs(est), std::abs(cf), 1e-300})) {
        score = std::numeric_limits<double>::infinity();
    }
    ++z.entries;
    if (score > 3.0) ++z.beyond_3;
    z.max_z = std::max(z.max_z, score);
}

} // namespace

ZScoreSummary compare_moments(const MomentEstimate& est, const PrecodingMoments& cf) {
    if (est.L != cf.L || est.K != cf.K) throw std::invalid_argument("compare_moments: size mismatch");
    ZScoreSummary z;
    for (int k = 0; k < cf.K; ++k) {
        for (int i = 0; i < cf.K; ++i) {
            const std::size_t idx = cf.index(k, i);
            const CMat raw = cf.second_moment(k, i);
            for (int l = 0; l < cf.L; ++l) {
                tally(z, est.b[idx](l).real(), cf.b[idx](l).real(), est.b_se_re[idx](l));
                tally(z, est.b[idx](l).imag(), cf.b[idx](l).imag(), est.b_se_im[idx](l));
                for (int lp = 0; lp < cf.L; ++lp) {
                    tally(z, est.raw2[idx](l, lp).real(), raw(l, lp).real(), est.raw2_se_re[idx](l, lp));
                    tally(z, est.raw2[idx](l, lp).imag(), raw(l, lp).imag(), est.raw2_se_im[idx](l, lp));
                }
            }
        }
        for (int l = 0; l < cf.L; ++l) tally(z, est.w_norm_sq(l, k), cf.w_norm_sq(l, k), est.w_norm_sq_se(l, k));
        tally(z, est.sat_signal(k), cf.sat_signal(k), est.sat_signal_se(k));
        tally(z, est.sat_fourth(k), cf.sat_fourth(k), est.sat_fourth_se(k));
        for (int i = 0; i < cf.K; ++i)
            if (i != k) tally(z, est.sat_cross(k, i), cf.sat_cross(k, i), est.sat_cross_se(k, i));
    }
    return z;
}

namespace {

// Per-trial observations for GU k: UAV desired signal, its square, ||g_k||^2,
// ||g_k||^4, and the summed interference from the other streams.
constexpr int kSeFields = 5;

double sinr_from_means(const double* m, double eta_sn_k, double noise) {
    const double ds = m[0];
    const double ds_var = m[1] - ds * ds;
    const double gg = m[2];
    const double gg_var = m[3] - gg * gg;
    const double num = eta_sn_k * gg * gg + ds * ds;
    const double den = ds_var + eta_sn_k * gg_var + m[4] + noise;
    return num / den;
}

} // namespace

SeEstimate estimate_se(const ScenarioConfig& config, const ChannelSet& channels,
                       const PowerAllocation& alloc_in, long trials, std::uint64_t seed) {
    if (trials < 2) throw std::invalid_argument("estimate_se: need at least two trials");
    const int L = channels.L;
    const int K = channels.K;
    const PowerAllocation alloc = apply_mode(alloc_in, config.mode);
    const Mat eta = alloc.eta_ap.cwiseMax(0.0).cwiseSqrt();
    const Vec& eta_sn = alloc.eta_sn;
    const double noise = config.noise_power();
    const Samplers smp(channels);
    const int stride = kSeFields * K;
    std::vector<double> obs(static_cast<std::size_t>(trials) * stride);

    parallel_for(chunk_count(trials), [&](int c) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
        Draw d;
        const long first = static_cast<long>(c) * kTrialsPerChunk;
        for (long t = 0; t < chunk_size(trials, c); ++t) {
            draw_all(channels, smp, rng, d);
            double* row = obs.data() + (first + t) * stride;
            for (int k = 0; k < K; ++k) {
                double ds = 0.0;
                double interference = 0.0;
                for (int i = 0; i < K; ++i) {
                    cplx acc = 0.0;
                    for (int l = 0; l < L; ++l) {
                        const CVec& hi = d.h[static_cast<std::size_t>(l * K + i)];
                        const CVec& hk = d.h[static_cast<std::size_t>(l * K + k)];
                        acc += eta(l, i) * hi.dot(hk);
                    }
                    if (i == k) {
                        ds = acc.real();
                    } else {
                        interference += std::norm(acc);
                        interference += eta_sn(i) * std::norm(d.g[static_cast<std::size_t>(k)].dot(d.g[static_cast<std::size_t>(i)]));
                    }
                }
                const double gg = d.g[static_cast<std::size_t>(k)].squaredNorm();
                double* f = row + kSeFields * k;
                f[0] = ds;
                f[1] = ds * ds;
                f[2] = gg;
                f[3] = gg * gg;
                f[4] = interference;
            }
        }
    });

    // Sums in trial order; identical for any worker count.
    std::vector<double> sum(static_cast<std::size_t>(stride), 0.0);
    for (long t = 0; t < trials; ++t)
        for (int j = 0; j < stride; ++j) sum[static_cast<std::size_t>(j)] += obs[static_cast<std::size_t>(t * stride + j)];

    SeEstimate out;
    out.trials = trials;
    out.se.resize(K);
    out.se_err.resize(K);
    out.sinr.resize(K);
    const double n = static_cast<double>(trials);
    for (int k = 0; k < K; ++k) {
        const double* s = sum.data() + kSeFields * k;
        double mean[kSeFields];
        for (int j = 0; j < kSeFields; ++j) mean[j] = s[j] / n;
        out.sinr(k) = sinr_from_means(mean, eta_sn(k), noise);
        out.se(k) = std::log2(1.0 + out.sinr(k));

        std::vector<double> loo(static_cast<std::size_t>(trials));
        double loo_mean = 0.0;
        for (long t = 0; t < trials; ++t) {
            const double* f = obs.data() + t * stride + kSeFields * k;
            double m[kSeFields];
            for (int j = 0; j < kSeFields; ++j) m[j] = (s[j] - f[j]) / (n - 1.0);
            loo[static_cast<std::size_t>(t)] = std::log2(1.0 + sinr_from_means(m, eta_sn(k), noise));
            loo_mean += loo[static_cast<std::size_t>(t)];
        }
        loo_mean /= n;
        double ss = 0.0;
        for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
        out.se_err(k) = std::sqrt((n - 1.0) / n * ss);
    }
    return out;
}

} // namespace cfsat
