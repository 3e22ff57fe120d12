// SPDX-License-Identifier: Apache-2.0
//
// uwbrt - deterministic polarimetric ray tracer for UWB coverage in shelf warehouses
// Copyright (C) 2026 The uwbrt Authors
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

#include <uwbrt/io.hpp>
#include <uwbrt/link.hpp>
#include <uwbrt/scenario.hpp>
#include <uwbrt/validation.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

namespace fs = std::filesystem;
using namespace uwbrt;

namespace
{

enum ExitCode
{
    kOk = 0,
    kIoError = 1,
    kValidationError = 2,
    kResourceError = 3,
    kOracleFailure = 4
};

struct RunOptions
{
    std::string preset;
    std::string scenario_file;
    std::string out_dir;
    std::optional<double> grid_spacing;
    std::optional<int> tessellation_order;
    std::optional<int> max_reflections;
    std::optional<std::string> diffraction;
    std::optional<int> freq_samples;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
};

ScenarioSpec load_scenario(const RunOptions &o)
{
    ScenarioSpec s = o.preset.empty() ? parse_scenario(read_file(o.scenario_file)) : build_preset(o.preset);
    if (o.grid_spacing)
        s.rx.grid.spacing = *o.grid_spacing;
    if (o.tessellation_order)
        s.engine.tessellation_order = *o.tessellation_order;
    if (o.max_reflections)
        s.engine.max_reflections = *o.max_reflections;
    if (o.diffraction)
        s.engine.enable_diffraction = *o.diffraction == "on";
    if (o.freq_samples)
        s.band.n_freq_samples = *o.freq_samples;
    validate_scenario(s);
    return s;
}

nlohmann::ordered_json parse_json_section(const std::string &text, const char *key)
{
    return nlohmann::ordered_json::parse(text).at(key);
}

int cmd_run(const RunOptions &o)
{
    const auto start = std::chrono::steady_clock::now();
    const ScenarioSpec s = load_scenario(o);
    const Scene scene = build_scene(s);
    const AntennaSpec tx = tx_antenna(s);
    const AntennaSpec rx = rx_antenna_template(s);
    PowerMap map = evaluate_grid(scene, tx, rx, s.rx.grid, s.engine, s.band, s.budget, o.workers);
    map.metadata.scenario_hash = scenario_hash(s);
    const CoverageStats stats = coverage_stats(map, s.budget, s.tx.position);
    const double within20 = covered_fraction_within(map, s.tx.position, 20.0);

    fs::create_directories(o.out_dir);
    const fs::path out(o.out_dir);
    const std::string scenario_text = serialize_scenario(s);
    const auto stats_json = stats_to_json(stats, within20);
    write_file((out / "scenario.json").string(), scenario_text);
    write_file((out / "power_map.csv").string(), power_map_csv(map));
    write_file((out / "heatmap.ppm").string(), power_map_ppm(map));
    write_file((out / "stats.json").string(), stats_json.dump(2) + "\n");

    nlohmann::ordered_json report;
    report["scenario_name"] = s.name;
    report["scenario_hash"] = hex64(map.metadata.scenario_hash);
    report["engine"] = parse_json_section(scenario_text, "engine");
    report["band"] = parse_json_section(scenario_text, "band");
    report["budget"] = parse_json_section(scenario_text, "budget");
    report["applied_gain_max_dbi"] = {{"tx", tx.gain_max_dbi}, {"rx", rx.gain_max_dbi}};
    report["grid"] = {{"nx", map.nx}, {"ny", map.ny}};
    report["stats"] = stats_json;
    report["outputs"] = {{"scenario", "scenario.json"},
                         {"power_map", "power_map.csv"},
                         {"heatmap", "heatmap.ppm"},
                         {"stats", "stats.json"}};
    report["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file((out / "report.json").string(), report.dump(2) + "\n");

    std::printf("%s: covered %.4f, reliable range %.2f m, blind spots %zu -> %s\n", s.name.c_str(),
                stats.covered_fraction, stats.reliable_range_m, stats.blind_spots, o.out_dir.c_str());
    return kOk;
}

int cmd_compare(const std::string &a, const std::string &b, const std::string &out_dir)
{
    const fs::path pa(a), pb(b);
    const ScenarioSpec sa = parse_scenario(read_file((pa / "scenario.json").string()));
    const ScenarioSpec sb = parse_scenario(read_file((pb / "scenario.json").string()));
    const auto ra = parse_power_csv(read_file((pa / "power_map.csv").string()));
    const auto rb = parse_power_csv(read_file((pb / "power_map.csv").string()));
    const ComparisonResult r = compare_runs(sa, ra, sb, rb);
    const auto j = comparison_to_json(r);
    if (!out_dir.empty())
    {
        fs::create_directories(out_dir);
        write_file((fs::path(out_dir) / "delta.csv").string(), delta_csv(r));
        write_file((fs::path(out_dir) / "comparison.json").string(), j.dump(2) + "\n");
    }
    std::cout << j.dump(2) << "\n";
    return kOk;
}

int cmd_validate(const std::string &suite)
{
    std::vector<std::string> suites;
    if (suite == "all")
        suites = oracle_suite_names();
    else
        suites.push_back(suite);
    bool all_pass = true;
    for (const auto &name : suites)
        for (const auto &c : run_oracle_suite(name))
        {
            all_pass = all_pass && c.pass;
            std::printf("[%s] %-14s %-58s measured %.9g expected %.9g tol %.3g\n", c.pass ? "PASS" : "FAIL",
                        c.suite.c_str(), c.name.c_str(), c.measured, c.expected, c.tolerance);
        }
    return all_pass ? kOk : kOracleFailure;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"uwbrt: ray-traced UWB coverage maps for shelf warehouses"};
    app.require_subcommand(1);

    RunOptions run;
    auto *run_cmd = app.add_subcommand("run", "Simulate a scenario and write map, heatmap, statistics and report");
    auto *preset_opt = run_cmd->add_option("--preset", run.preset, "Named preset")->check(CLI::IsMember(preset_names()));
    auto *file_opt = run_cmd->add_option("--scenario", run.scenario_file, "Scenario file (JSON)");
    preset_opt->excludes(file_opt);
    run_cmd->add_option("--out", run.out_dir, "Output directory")->required();
    run_cmd->add_option("--grid-spacing", run.grid_spacing, "Receiver grid spacing (m)");
    run_cmd->add_option("--tessellation-order", run.tessellation_order, "Launch icosphere subdivision level");
    run_cmd->add_option("--max-reflections", run.max_reflections, "Reflection limit of specular paths");
    run_cmd->add_option("--diffraction", run.diffraction, "Edge diffraction on|off")->check(CLI::IsMember({"on", "off"}));
    run_cmd->add_option("--freq-samples", run.freq_samples, "Number of band samples (odd)");
    run_cmd->add_option("--workers", run.workers, "Worker threads (output does not depend on it)")
        ->check(CLI::PositiveNumber);

    std::string cmp_a, cmp_b, cmp_out;
    auto *cmp_cmd = app.add_subcommand("compare", "Cellwise and statistics difference of two run directories (A - B)");
    cmp_cmd->add_option("run_a", cmp_a, "First run directory")->required()->check(CLI::ExistingDirectory);
    cmp_cmd->add_option("run_b", cmp_b, "Second run directory")->required()->check(CLI::ExistingDirectory);
    cmp_cmd->add_option("--out", cmp_out, "Directory for delta.csv and comparison.json");

    std::string suite = "all";
    auto *val_cmd = app.add_subcommand("validate", "Run closed-form oracle suites");
    std::vector<std::string> suite_choices = oracle_suite_names();
    suite_choices.push_back("all");
    val_cmd->add_option("suite", suite, "Suite name or 'all'")->check(CLI::IsMember(suite_choices));

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (run_cmd->parsed())
        {
            if (run.preset.empty() && run.scenario_file.empty())
            {
                std::fprintf(stderr, "error: run needs --preset or --scenario\n");
                return kValidationError;
            }
            return cmd_run(run);
        }
        if (cmp_cmd->parsed())
            return cmd_compare(cmp_a, cmp_b, cmp_out);
        if (val_cmd->parsed())
            return cmd_validate(suite);
    }
    catch (const ScenarioError &e)
    {
        std::fprintf(stderr, "error [%s]: %s\n", e.code().c_str(), e.what());
        return kValidationError;
    }
    catch (const ResourceError &e)
    {
        std::fprintf(stderr, "resource error: %s\n", e.what());
        return kResourceError;
    }
    catch (const std::invalid_argument &e)
    {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kValidationError;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kIoError;
    }
    return kOk;
}
