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

#include <cmath>

#include "doctest.h"

#include "cfsat/channel.hpp"
#include "cfsat/scenario.hpp"

#include "oracles.hpp"

using namespace cfsat;
using doctest::Approx;

namespace {

// Fine-grid trapezoid over +-6 sigma.
cplx scattering_entry(int m, int n, double phi, double sigma, double scale) {
    const int steps = 40000;
    const double lo = -6.0 * sigma;
    const double h = 12.0 * sigma / steps;
    cplx acc = 0.0;
    for (int s = 0; s <= steps; ++s) {
        const double d = lo + s * h;
        const double w = (s == 0 || s == steps) ? 0.5 : 1.0;
        const double pdf = std::exp(-d * d / (2 * sigma * sigma)) / (std::sqrt(2 * kPi) * sigma);
        acc += w * pdf * std::exp(cplx(0.0, kPi * (m - n) * std::sin(phi + d)));
    }
    return scale * h * acc;
}

} // namespace

TEST_SUITE("channel") {

TEST_CASE("LoS probability") {
    CHECK(los_probability(45, 5, 0.05) == Approx(0.596418003109085).epsilon(1e-12));
    CHECK(los_probability(90, 5, 0.05) == Approx(0.9334269016869262).epsilon(1e-12));
    CHECK(los_probability(10, 1e-12, 0.05) == Approx(1.0).epsilon(1e-10));
    double prev = 0.0;
    for (int t = 0; t <= 90; ++t) {
        const double p = los_probability(t, 5, 0.05);
        CHECK(p > prev);
        CHECK(p < 1.0);
        prev = p;
    }
}

TEST_CASE("UAV path loss") {
    CHECK(uav_pathloss_db(100, 10, 10, 6, 0) == Approx(-81.32302500767288).epsilon(1e-12));
    CHECK(uav_pathloss_db(1, 0, 0, 1, 0) == Approx(-8.5));
    CHECK(uav_pathloss_db(200, 0, 0, 1, 0) - uav_pathloss_db(100, 0, 0, 1, 0) ==
          Approx(-38.63 * std::log10(2.0)));
    CHECK_THROWS(uav_pathloss_db(0.5, 0, 0, 1, 0));
}

TEST_CASE("satellite path loss") {
    CHECK(sat_pathloss_db(550e3, 30, 10, 6, 0) == Approx(-122.82027879755776).epsilon(1e-12));
    CHECK(sat_pathloss_db(1, 0, 0, 1, 0) == Approx(-32.45));
    CHECK(sat_pathloss_db(1e4, 0, 0, 2, 6) - sat_pathloss_db(1e4, 0, 0, 2, 0) == Approx(6.0));
}

TEST_CASE("Rician factors") {
    CHECK(rician_factor_uav(100) == Approx(50.11872336272722).epsilon(1e-12));
    CHECK(linear_to_db(rician_factor_uav(1)) == Approx(15.0));
    CHECK(linear_to_db(rician_factor_uav(10)) == Approx(16.0));
    CHECK(linear_to_db(rician_factor_sat(100, 550e3)) == Approx(32.370181344747124).epsilon(1e-12));
    CHECK(linear_to_db(rician_factor_sat(1, 1)) == Approx(9.5));
    CHECK(linear_to_db(rician_factor_sat(10, 1)) == Approx(19.5));
}

TEST_CASE("ULA response") {
    const CVec a = array_response(2, kPi / 6);
    CHECK(std::abs(a(0) - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(a(1) - cplx(0, 1)) < 1e-15);
    CHECK((array_response(5, 0.0) - CVec::Ones(5)).norm() == 0.0);
    for (double phi : {-1.0, 0.3, 2.0}) CHECK(array_response(7, phi).squaredNorm() == Approx(7.0));
}

TEST_CASE("Gauss-Hermite rule integrates polynomials exactly") {
    const GaussHermiteRule r = gauss_hermite(16);
    CHECK(r.weights.sum() == Approx(std::sqrt(kPi)).epsilon(1e-13));
    CHECK(r.weights.dot(r.nodes.array().square().matrix()) == Approx(std::sqrt(kPi) / 2).epsilon(1e-13));
    CHECK(r.weights.dot(r.nodes.array().pow(4).matrix()) == Approx(3 * std::sqrt(kPi) / 4).epsilon(1e-12));
}

TEST_CASE("scattering covariance") {
    SUBCASE("zero spread is rank one") {
        const CMat R = scattering_covariance(4, 0.4, 0.0, 2.0);
        const CVec a = array_response(4, 0.4);
        CHECK((R - 2.0 * a * a.adjoint()).norm() < 1e-12);
    }
    SUBCASE("diagonal equals the scale") {
        const CMat R = scattering_covariance(5, -0.7, 0.3, 1.7);
        for (int m = 0; m < 5; ++m) CHECK(R(m, m).real() == Approx(1.7));
    }
    SUBCASE("matches fine-grid quadrature") {
        const double phi = kPi / 6;
        const double sigma = deg_to_rad(10.0);
        const CMat R = scattering_covariance(4, phi, sigma, 1.0);
        for (int m = 0; m < 4; ++m)
            for (int n = 0; n < 4; ++n) CHECK(std::abs(R(m, n) - scattering_entry(m, n, phi, sigma, 1.0)) < 1e-6);
    }
    SUBCASE("Hermitian Toeplitz and PSD") {
        const CMat R = scattering_covariance(8, 1.1, 0.2, 1.0);
        CHECK((R - R.adjoint()).norm() < 1e-13);
        for (int m = 1; m < 8; ++m)
            for (int n = 1; n < 8; ++n) CHECK(std::abs(R(m, n) - R(m - 1, n - 1)) < 1e-12);
        Eigen::SelfAdjointEigenSolver<CMat> es(R);
        CHECK(es.eigenvalues().minCoeff() >= -1e-10 * 8);
    }
}

TEST_CASE("Rician link statistics") {
    RicianLinkParams p;
    p.length = 4;
    p.beta_db = 0.0;
    p.kappa = 1.0;
    p.pr_los = 1.0;
    p.asd = 0.2;
    const LinkStatistics s = rician_link(p);
    CHECK(s.mu.squaredNorm() == Approx(2.0).epsilon(1e-12));
    CHECK(s.R.norm() < 1e-15);

    p.pr_los = 0.3;
    p.kappa = 4.0;
    p.beta_db = -3.0;
    const LinkStatistics t = rician_link(p);
    const double beta = db_to_linear(-3.0);
    CHECK(t.mu.squaredNorm() == Approx(0.3 * beta * 0.8 * 4).epsilon(1e-10));
    CHECK(t.R(0, 0).real() == Approx(0.7 * beta / 5.0).epsilon(1e-12));
    CHECK((t.E - t.mu * t.mu.adjoint() - t.R).norm() <= 1e-12 * t.E.norm());
    CHECK(t.trace() == Approx(t.mu.squaredNorm() + t.R.trace().real()).epsilon(1e-12));

    p.kappa = 1e12;
    const LinkStatistics u = rician_link(p);
    CHECK(u.R.norm() < 1e-10 * u.E.norm());
}

TEST_CASE("scenario links satisfy their invariants") {
    ScenarioConfig c;
    Rng rng(5);
    const Geometry g = build_geometry(c, rng);
    const ChannelSet cs = build_channels(g, c, rng);
    REQUIRE(cs.uav.size() == static_cast<std::size_t>(c.L * c.K));
    for (const auto& s : cs.uav) {
        CHECK(s.length() == c.M);
        CHECK(s.mu.squaredNorm() ==
              Approx(s.pr_los * s.beta_los * s.kappa / (s.kappa + 1) * c.M).epsilon(1e-10));
        CHECK((s.R - s.R.adjoint()).norm() <= 1e-14 * s.R.norm());
    }
    for (const auto& s : cs.sat) CHECK(s.length() == c.N);
}

TEST_CASE("sampling reproduces the statistics") {
    Rng rng(17);
    SUBCASE("deterministic link") {
        const LinkStatistics s = make_link_statistics(cfsat::testing::random_cvec(rng, 3, 1.0), CMat::Zero(3, 3));
        const ChannelSampler smp(s);
        for (int i = 0; i < 5; ++i) CHECK((smp.draw(rng) - s.mu).norm() == 0.0);
    }
    SUBCASE("identity covariance") {
        const LinkStatistics s = make_link_statistics(CVec::Zero(3), CMat::Identity(3, 3));
        const ChannelSampler smp(s);
        const int n = 100000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = smp.draw(rng).squaredNorm();
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / n;
        const double se = std::sqrt((sum2 / n - mean * mean) / n);
        CHECK(std::abs(mean - 3.0) < 3 * se);
    }
    SUBCASE("correlated covariance, entrywise") {
        const LinkStatistics s = cfsat::testing::random_link(rng, 4, 1.0, false);
        const ChannelSampler smp(s);
        const int n = 100000;
        CMat sum = CMat::Zero(4, 4);
        Mat sq_re = Mat::Zero(4, 4), sq_im = Mat::Zero(4, 4);
        for (int i = 0; i < n; ++i) {
            const CVec h = smp.draw(rng);
            const CMat o = h * h.adjoint();
            sum += o;
            sq_re += o.real().cwiseAbs2();
            sq_im += o.imag().cwiseAbs2();
        }
        const CMat mean = sum / double(n);
        int beyond = 0;
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                const double se_re = std::sqrt((sq_re(a, b) / n - std::pow(mean(a, b).real(), 2)) / n);
                if (std::abs(mean(a, b).real() - s.R(a, b).real()) > 3 * se_re) ++beyond;
                if (a != b) {
                    const double se_im = std::sqrt((sq_im(a, b) / n - std::pow(mean(a, b).imag(), 2)) / n);
                    if (std::abs(mean(a, b).imag() - s.R(a, b).imag()) > 3 * se_im) ++beyond;
                }
            }
        }
        CHECK(beyond == 0);
    }
    SUBCASE("full pipeline link at 100 m") {
        RicianLinkParams p;
        p.length = 4;
        p.beta_db = uav_pathloss_db(100, 10, 10, 6, 0);
        p.kappa = rician_factor_uav(100);
        p.pr_los = los_probability(30, 5, 0.05);
        p.aoa = 0.5;
        p.asd = deg_to_rad(10);
        const LinkStatistics s = rician_link(p);
        const ChannelSampler smp(s);
        const int n = 100000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = smp.draw(rng).squaredNorm();
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / n;
        const double se = std::sqrt((sum2 / n - mean * mean) / n);
        CHECK(std::abs(mean - s.trace()) < 3 * se);
    }
}

}
