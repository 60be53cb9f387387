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

#include "cfsat/config_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cfsat {

using nlohmann::json;

Preset preset(std::string_view name) {
    Preset p;
    if (name == "desk") return p;
    if (name == "paper") {
        p.config.area_side = 4000.0;
        p.config.L = 60;
        p.config.K = 40;
        p.config.M = 4;
        p.config.N = 100;
        p.seeds = 10;
        return p;
    }
    throw std::invalid_argument("unknown preset: " + std::string(name));
}

std::vector<std::string> preset_names() { return {"desk", "paper"}; }

namespace {

double get_number(const json& v, const std::string& key) {
    if (!v.is_number()) throw std::invalid_argument("config key '" + key + "' must be a number");
    return v.get<double>();
}

int get_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw std::invalid_argument("config key '" + key + "' must be an integer");
    return v.get<int>();
}

std::string get_string(const json& v, const std::string& key) {
    if (!v.is_string()) throw std::invalid_argument("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

template <class F>
void for_each_field(ScenarioConfig& c, F&& f) {
    f("area_side", c.area_side);
    f("L", c.L);
    f("K", c.K);
    f("M", c.M);
    f("N", c.N);
    f("uav_altitude", c.uav_altitude);
    f("sat_altitude", c.sat_altitude);
    f("P_ap_dl", c.P_ap_dl);
    f("P_sn_dl", c.P_sn_dl);
    f("P_dsp", c.P_dsp);
    f("P_hov", c.P_hov);
    f("amp_efficiency", c.amp_efficiency);
    f("f_c", c.f_c);
    f("bandwidth", c.bandwidth);
    f("noise_figure_gu", c.noise_figure_gu);
    f("asd", c.asd);
    f("asd_sat", c.asd_sat);
    f("shadow_std_uav", c.shadow_std_uav);
    f("shadow_std_sat", c.shadow_std_sat);
    f("los_a", c.los_a);
    f("los_b", c.los_b);
    f("gain_uav", c.gain_uav);
    f("gain_gu", c.gain_gu);
    f("gain_sat", c.gain_sat);
    f("se_min", c.se_min);
    f("fpa_exponent", c.fpa_exponent);
    f("sca_epsilon", c.sca_epsilon);
    f("sca_max_iters", c.sca_max_iters);
    f("rs_grid", c.rs_grid);
    f("mc_trials", c.mc_trials);
    f("quadrature_nodes", c.quadrature_nodes);
    f("rng_seed", c.rng_seed);
    f("mode", c.mode);
    f("moment_mode", c.moment_mode);
}

struct Assign {
    const json& value;
    const std::string& key;
    bool& matched;

    void set(double& dst) { dst = get_number(value, key); }
    void set(int& dst) { dst = get_int(value, key); }
    void set(std::uint64_t& dst) {
        if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0))
            throw std::invalid_argument("config key '" + key + "' must be a nonnegative integer");
        dst = value.get<std::uint64_t>();
    }
    void set(std::vector<double>& dst) {
        dst.clear();
        if (value.is_array()) {
            for (const auto& e : value) dst.push_back(get_number(e, key));
        } else {
            dst.push_back(get_number(value, key));
        }
    }
    void set(NetworkMode& dst) { dst = parse_network_mode(get_string(value, key)); }
    void set(MomentMode& dst) { dst = parse_moment_mode(get_string(value, key)); }

    template <class T>
    void operator()(const char* name, T& dst) {
        if (key != name) return;
        matched = true;
        set(dst);
    }
};

} // namespace

ScenarioConfig parse_config(std::string_view json_text, const ScenarioConfig& base) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
    ScenarioConfig c = base;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        bool matched = false;
        const std::string key = it.key();
        for_each_field(c, Assign{it.value(), key, matched});
        if (!matched) throw std::invalid_argument("unknown config key '" + key + "'");
    }
    c.validate();
    return c;
}

ScenarioConfig load_config(const std::string& path, const ScenarioConfig& base) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), base);
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

namespace {

struct Emit {
    json& out;
    void operator()(const char* name, const double& v) { out[name] = v; }
    void operator()(const char* name, const int& v) { out[name] = v; }
    void operator()(const char* name, const std::uint64_t& v) { out[name] = v; }
    void operator()(const char* name, const std::vector<double>& v) { out[name] = v; }
    void operator()(const char* name, const NetworkMode& v) { out[name] = std::string(to_string(v)); }
    void operator()(const char* name, const MomentMode& v) { out[name] = std::string(to_string(v)); }
};

} // namespace

std::string config_to_json(const ScenarioConfig& config) {
    json out = json::object();
    ScenarioConfig copy = config;
    for_each_field(copy, Emit{out});
    return out.dump();
}

std::string config_hash(const ScenarioConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config_to_json(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    static const char* digits = "0123456789abcdef";
    std::string hex(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) hex[static_cast<std::size_t>(i)] = digits[h & 0xf];
    return hex;
}

} // namespace cfsat
