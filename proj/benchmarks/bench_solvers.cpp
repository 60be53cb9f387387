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

#include <benchmark/benchmark.h>

#include "cfsat/conic.hpp"
#include "cfsat/experiments.hpp"
#include "oracles.hpp"

using namespace cfsat;

static void BM_ConicRandomQcqp(benchmark::State& state) {
    Rng rng(11);
    const int n = static_cast<int>(state.range(0));
    const conic::ConicProblem p = testing::to_conic(testing::random_qcqp(rng, n, 3, 4));
    for (auto _ : state) benchmark::DoNotOptimize(conic::solve(p));
}
BENCHMARK(BM_ConicRandomQcqp)->Arg(4)->Arg(10)->Arg(40);

// Random-search start plus SCA on one desk drop.
static void BM_EemAllocation(benchmark::State& state) {
    ScenarioConfig c;
    c.K = static_cast<int>(state.range(0));
    const Scenario s = make_scenario(c, 1);
    for (auto _ : state) benchmark::DoNotOptimize(eem_allocation(s));
}
BENCHMARK(BM_EemAllocation)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
