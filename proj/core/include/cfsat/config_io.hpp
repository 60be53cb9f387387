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
#include <vector>

#include "cfsat/scenario.hpp"

namespace cfsat {

struct Preset {
    ScenarioConfig config;
    int seeds = 20;
};

/// `desk` or `paper`; throws std::invalid_argument otherwise.
Preset preset(std::string_view name);
std::vector<std::string> preset_names();

/// Applies a flat JSON object on top of `base`. Keys are ScenarioConfig field
/// names; unknown keys and mistyped values throw std::invalid_argument. The
/// result is validated.
ScenarioConfig parse_config(std::string_view json_text, const ScenarioConfig& base = {});
ScenarioConfig load_config(const std::string& path, const ScenarioConfig& base = {});

/// Canonical JSON: every field, sorted keys, shortest round-trip numbers.
std::string config_to_json(const ScenarioConfig& config);

/// FNV-1a 64 of the canonical JSON, as 16 lowercase hex digits.
std::string config_hash(const ScenarioConfig& config);

/// Shortest round-trip decimal form, independent of the locale.
std::string format_double(double value);

} // namespace cfsat
