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

#include "cfsat/experiments.hpp"

using namespace cfsat;

static void BM_AssembleMoments(benchmark::State& state) {
    ScenarioConfig c;
    c.L = static_cast<int>(state.range(0));
    const Scenario s = make_scenario(c, 1);
    for (auto _ : state) benchmark::DoNotOptimize(assemble_moments(s.channels, c.moment_mode));
}
BENCHMARK(BM_AssembleMoments)->Arg(4)->Arg(9)->Arg(16);

static void BM_EstimateMoments(benchmark::State& state) {
    ScenarioConfig c;
    const Scenario s = make_scenario(c, 1);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_moments(s.channels, state.range(0), 3));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EstimateMoments)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
