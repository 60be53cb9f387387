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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cfsat/config_io.hpp"
#include "cfsat/experiments.hpp"

namespace fs = std::filesystem;
using namespace cfsat;

namespace {

struct Common {
    std::string config_path;
    std::string preset_name = "desk";
    int seeds = 0;
    std::string mode;
    std::vector<double> psn;
    std::string out = "out";
    int mc_trials = 0;
    std::string moment_mode;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "Flat JSON config applied on top of the preset");
    cmd->add_option("--preset", c.preset_name, "Base preset")->check(CLI::IsMember(preset_names()));
    cmd->add_option("--seeds", c.seeds, "Number of scenario seeds (default: preset)")->check(CLI::PositiveNumber);
    cmd->add_option("--mode", c.mode, "Network mode")->check(CLI::IsMember({"NTN_TN", "TN_ONLY", "NTN_ONLY"}));
    cmd->add_option("--psn", c.psn, "Satellite power(s) in W")->delimiter(',');
    cmd->add_option("--out", c.out, "Output directory");
    cmd->add_option("--mc-trials", c.mc_trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    cmd->add_option("--moment-mode", c.moment_mode, "Fourth-moment evaluation")
        ->check(CLI::IsMember({"exact", "paper"}));
}

struct Resolved {
    ScenarioConfig config;
    std::vector<std::uint64_t> seeds;
};

Resolved resolve(const Common& c, bool apply_psn) {
    const Preset p = preset(c.preset_name);
    Resolved r;
    r.config = c.config_path.empty() ? p.config : load_config(c.config_path, p.config);
    if (!c.mode.empty()) r.config.mode = parse_network_mode(c.mode);
    if (apply_psn && !c.psn.empty()) r.config.P_sn_dl = c.psn.front();
    if (c.mc_trials > 0) r.config.mc_trials = c.mc_trials;
    if (!c.moment_mode.empty()) r.config.moment_mode = parse_moment_mode(c.moment_mode);
    r.config.validate();
    r.seeds = seed_range(c.seeds > 0 ? c.seeds : p.seeds);
    return r;
}

template <class Rows>
void write_table(const fs::path& path, const Rows& rows) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    write_csv(os, rows);
}

void write_meta(const fs::path& path, const std::string& command, const Resolved& r,
                const nlohmann::json& extra) {
    nlohmann::json meta;
    meta["tool"] = "cfsat";
    meta["version"] = CFSAT_VERSION;
    meta["command"] = command;
    meta["config_hash"] = config_hash(r.config);
    meta["config"] = nlohmann::json::parse(config_to_json(r.config));
    meta["seeds"] = r.seeds;
    for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
    std::ofstream os(path, std::ios::binary);
    os << meta.dump(2) << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-efficiency experiments for satellite-assisted UAV cell-free massive MIMO"};
    app.require_subcommand(1);
    app.set_version_flag("--version", CFSAT_VERSION);

    Common cdf_opt, uav_opt, gu_opt, val_opt;
    bool cdf_mc = false;
    std::vector<int> L_values{4, 6, 9, 12, 16};
    std::vector<int> K_values{2, 4, 6, 8};
    bool skip_moments = false;

    auto* cdf = app.add_subcommand("cdf", "Per-GU SE samples across modes and satellite powers");
    add_common(cdf, cdf_opt);
    cdf->add_flag("--with-mc", cdf_mc, "Pair each closed-form SE with a Monte Carlo estimate");

    auto* uavs = app.add_subcommand("ee-vs-uavs", "Average EE against the number of UAVs");
    add_common(uavs, uav_opt);
    uavs->add_option("--values", L_values, "UAV counts")->delimiter(',');

    auto* gus = app.add_subcommand("ee-vs-gus", "Average EE against the number of GUs");
    add_common(gus, gu_opt);
    gus->add_option("--values", K_values, "GU counts")->delimiter(',');

    auto* val = app.add_subcommand("validate", "Closed form against Monte Carlo");
    add_common(val, val_opt);
    val->add_flag("--skip-moments", skip_moments, "Compare SE only");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cdf->parsed()) {
            const Resolved r = resolve(cdf_opt, false);
            CdfOptions o;
            if (!cdf_opt.mode.empty()) o.modes = {r.config.mode};
            if (!cdf_opt.psn.empty()) o.p_sn = cdf_opt.psn;
            o.with_mc = cdf_mc;
            const auto rows = run_cdf(r.config, r.seeds, o);
            fs::create_directories(cdf_opt.out);
            write_table(fs::path(cdf_opt.out) / "cdf.csv", rows);
            nlohmann::json extra;
            extra["p_sn"] = o.p_sn;
            std::vector<std::string> modes;
            for (auto m : o.modes) modes.emplace_back(to_string(m));
            extra["modes"] = modes;
            extra["with_mc"] = o.with_mc;
            write_meta(fs::path(cdf_opt.out) / "cdf.meta.json", "cdf", r, extra);
            std::cout << "wrote " << rows.size() << " rows to " << (fs::path(cdf_opt.out) / "cdf.csv").string() << '\n';
            return 0;
        }
        if (uavs->parsed() || gus->parsed()) {
            const bool by_uav = uavs->parsed();
            const Common& opt = by_uav ? uav_opt : gu_opt;
            const Resolved r = resolve(opt, true);
            const std::vector<int>& values = by_uav ? L_values : K_values;
            const CurveResult res = by_uav ? run_ee_vs_uavs(r.config, values, r.seeds)
                                           : run_ee_vs_gus(r.config, values, r.seeds);
            const std::string stem = by_uav ? "ee_vs_uavs" : "ee_vs_gus";
            fs::create_directories(opt.out);
            write_table(fs::path(opt.out) / (stem + ".csv"), res.curve);
            write_table(fs::path(opt.out) / (stem + "_runs.csv"), res.runs);
            nlohmann::json extra;
            extra[by_uav ? "L_values" : "K_values"] = values;
            write_meta(fs::path(opt.out) / (stem + ".meta.json"), by_uav ? "ee-vs-uavs" : "ee-vs-gus", r, extra);
            for (const auto& c : res.curve)
                std::cout << "L=" << c.L << " K=" << c.K << ' ' << c.strategy << " mean_ee=" << format_double(c.mean_ee)
                          << '\n';
            return 0;
        }
        if (val->parsed()) {
            const Resolved r = resolve(val_opt, true);
            const ValidateReport rep = run_validate(r.config, r.seeds, !skip_moments);
            fs::create_directories(val_opt.out);
            write_table(fs::path(val_opt.out) / "validate.csv", rep.rows);
            nlohmann::json extra;
            extra["entries"] = rep.entries;
            extra["beyond_3se"] = rep.beyond_3;
            extra["max_z"] = rep.max_z;
            extra["passed"] = rep.passed;
            write_meta(fs::path(val_opt.out) / "validate.meta.json", "validate", r, extra);
            std::cout << "compared " << rep.entries << " entries, " << rep.beyond_3 << " beyond 3 SE, max z "
                      << format_double(rep.max_z) << (rep.passed ? ": PASS" : ": FAIL") << '\n';
            return rep.passed ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
