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

#include <functional>

namespace cfsat {

/// Worker threads for embarrassingly parallel loops: CFSAT_WORKERS if set and
/// positive, otherwise the hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, n). Tasks are independent; any order, any thread.
/// The first exception thrown by a task is rethrown after all workers join.
void parallel_for(int n, const std::function<void(int)>& body, int workers = 0);

} // namespace cfsat
