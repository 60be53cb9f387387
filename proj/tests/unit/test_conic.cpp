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

#include <sstream>

#include "doctest.h"

#include "cfsat/conic.hpp"

#include "oracles.hpp"

using namespace cfsat;
using namespace cfsat::conic;
using doctest::Approx;

TEST_SUITE("conic") {

TEST_CASE("bound on a single variable") {
    ConicProblem p;
    const int r = p.add_variable("r");
    p.add_affine_le({{r, 1.0}}, 3.0, "cap");
    p.set_objective(Sense::Maximize, {{r, 1.0}});
    const ConicSolution s = solve(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.x(r) == Approx(3.0).epsilon(1e-6));
    CHECK(s.objective == Approx(3.0).epsilon(1e-6));
}

TEST_CASE("scalar quadratic") {
    ConicProblem p;
    const int x = p.add_variable("x", -10.0, kInf);
    p.add_quadratic_le(Mat::Identity(1, 1), {x}, {}, 4.0, "sq");
    p.set_objective(Sense::Minimize, {{x, 1.0}});
    const ConicSolution s = solve(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.x(x) == Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("linear objective over the unit disk") {
    ConicProblem p;
    const int a = p.add_variable("a"), b = p.add_variable("b");
    p.add_quadratic_le(Mat::Identity(2, 2), {a, b}, {}, 1.0, "disk");
    p.set_objective(Sense::Maximize, {{a, 0.6}, {b, 0.8}});
    const ConicSolution s = solve(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.objective == Approx(1.0).epsilon(1e-6));
    CHECK(s.x(a) == Approx(0.6).epsilon(1e-6));
    CHECK(s.x(b) == Approx(0.8).epsilon(1e-6));

    // Projection oracle on a fine angular grid.
    double best = -1.0;
    for (int i = 0; i < 2000000; ++i) {
        const double th = 2 * kPi * i / 2000000.0;
        best = std::max(best, 0.6 * std::cos(th) + 0.8 * std::sin(th));
    }
    CHECK(std::abs(s.objective - best) <= 1e-6);
}

TEST_CASE("ellipsoid with a fixed variable and bounds") {
    ConicProblem p;
    const int x = p.add_variable("x"), y = p.add_variable("y", 0.0, 0.0), z = p.add_variable("z", 0.0, 0.25);
    Mat Q(3, 3);
    Q << 2, 0, 0, 0, 1, 0, 0, 0, 1;
    p.add_quadratic_le(Q, {x, y, z}, {}, 8.0, "ell");
    p.set_objective(Sense::Maximize, {{x, 1.0}, {y, 5.0}, {z, 1.0}});
    const ConicSolution s = solve(p);
    REQUIRE(s.status == SolveStatus::Optimal);
    CHECK(s.x(y) == 0.0);
    CHECK(s.x(z) == Approx(0.25).epsilon(1e-6));
    CHECK(s.x(x) == Approx(std::sqrt((8.0 - 0.0625) / 2)).epsilon(1e-6));
}

TEST_CASE("infeasible and unbounded problems are reported") {
    ConicProblem p;
    const int a = p.add_variable("a", 0.0, 1.0);
    p.add_affine_ge({{a, 1.0}}, 2.0, "low");
    p.set_objective(Sense::Maximize, {{a, 1.0}});
    CHECK(solve(p).status == SolveStatus::Infeasible);

    ConicProblem q;
    const int b = q.add_variable("b", 0.0, kInf);
    const int c = q.add_variable("c");
    q.add_quadratic_le(Mat::Identity(1, 1), {c}, {{b, -1.0}}, 1.0, "cone");
    q.set_objective(Sense::Maximize, {{b, 1.0}});
    CHECK(solve(q).status == SolveStatus::Unbounded);
}

TEST_CASE("indefinite quadratics are rejected at ingestion") {
    ConicProblem p;
    const int a = p.add_variable("a"), b = p.add_variable("b");
    Mat Q(2, 2);
    Q << 1, 2, 2, 1;
    CHECK_THROWS(p.add_quadratic_le(Q, {a, b}, {}, 1.0, "bad"));
}

TEST_CASE("random instances match the dual projected-gradient oracle") {
    Rng rng(2024);
    for (int t = 0; t < 40; ++t) {
        const int n = 2 + t % 9;
        const auto inst = cfsat::testing::random_qcqp(rng, n, 1 + t % 3, t % 4);
        const double oracle = cfsat::testing::dual_projected_gradient(inst);
        const ConicSolution s = solve(cfsat::testing::to_conic(inst));
        REQUIRE(s.status == SolveStatus::Optimal);
        CHECK(std::abs(s.objective - oracle) <= 1e-6 * std::max(1.0, std::abs(oracle)));
        CHECK(cfsat::testing::to_conic(inst).max_violation(s.x) <= 1e-6);
    }
}

TEST_CASE("scaling the objective leaves the argmax in place") {
    Rng rng(7);
    const auto inst = cfsat::testing::random_qcqp(rng, 6, 2, 2);
    auto scaled = inst;
    scaled.c *= 37.0;
    const ConicSolution a = solve(cfsat::testing::to_conic(inst));
    const ConicSolution b = solve(cfsat::testing::to_conic(scaled));
    REQUIRE(a.status == SolveStatus::Optimal);
    REQUIRE(b.status == SolveStatus::Optimal);
    CHECK(b.objective == doctest::Approx(37.0 * a.objective).epsilon(1e-8));
    CHECK((a.x - b.x).norm() <= 1e-4 * (1 + a.x.norm()));
}

TEST_CASE("warm start does not degrade the result") {
    Rng rng(8);
    const auto inst = cfsat::testing::random_qcqp(rng, 8, 2, 3);
    const ConicProblem p = cfsat::testing::to_conic(inst);
    const ConicSolution cold = solve(p);
    SolverOptions o;
    o.warm_start = cold.x;
    const ConicSolution warm = solve(p, o);
    CHECK(warm.objective >= cold.objective - 1e-8 * (1 + std::abs(cold.objective)));
}

TEST_CASE("repeated solves are identical") {
    Rng rng(9);
    const ConicProblem p = cfsat::testing::to_conic(cfsat::testing::random_qcqp(rng, 5, 2, 1));
    const ConicSolution a = solve(p), b = solve(p);
    CHECK(a.x == b.x);
    CHECK(a.iterations == b.iterations);
}

TEST_CASE("problem dump format") {
    ConicProblem p;
    const int a = p.add_variable("a", 0.0, 2.0);
    p.add_affine_le({{a, 1.0}}, 1.5, "cap");
    p.add_quadratic_le(Mat::Identity(1, 1), {a}, {}, 4.0, "sq");
    p.set_objective(Sense::Maximize, {{a, 1.0}});
    std::ostringstream os;
    p.dump(os);
    const std::string s = os.str();
    CHECK(s.find("var 0 a") != std::string::npos);
    CHECK(s.find("lin cap") != std::string::npos);
    CHECK(s.find("quad sq") != std::string::npos);
    CHECK(p.constraint_slack("cap", Vec::Constant(1, 1.0)) == Approx(-0.5));
    CHECK(p.max_violation(Vec::Constant(1, 3.0)) == Approx(5.0));
}

}
