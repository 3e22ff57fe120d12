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

#include "catch_amalgamated.hpp"

#include <uwbrt/scenario.hpp>

using namespace uwbrt;
using Catch::Approx;

namespace
{

std::string error_code(const std::string &text)
{
    try
    {
        parse_scenario(text);
    }
    catch (const ScenarioError &e)
    {
        return e.code();
    }
    return "none";
}

} // namespace

TEST_CASE("Every preset round-trips through the canonical text", "[scenario]")
{
    for (const auto &name : preset_names())
    {
        const ScenarioSpec s = build_preset(name);
        const std::string text = serialize_scenario(s);
        CHECK(text.back() == '\n');
        const ScenarioSpec back = parse_scenario(text);
        CHECK(back == s);
        CHECK(serialize_scenario(back) == text);
        CHECK(scenario_hash(back) == scenario_hash(s));
    }
    CHECK(scenario_hash(build_preset("pol-hh")) != scenario_hash(build_preset("pol-hv")));
}

TEST_CASE("Minimal file takes the documented defaults", "[scenario]")
{
    const ScenarioSpec s = parse_scenario(R"({"schema_version": 1})");
    CHECK(s.floor.extent_x == 40.0);
    CHECK(s.floor.extent_y == 20.0);
    CHECK(s.floor.material == Material::concrete());
    CHECK(s.shelves.material == Material::pec());
    CHECK(s.tx.position == Vec3{20.0, 10.0, 1.5});
    CHECK(s.tx.antenna.polarization == Polarization::Vertical);
    CHECK(s.tx.antenna.gain_max_dbi == 3.0);
    CHECK(s.rx.grid.spacing == 0.25);
    CHECK(s.rx.grid.height == 0.2);
    CHECK(s.band.f_center == 3.994e9);
    CHECK(s.band.bandwidth == 4.68e8);
    CHECK(s.band.n_freq_samples == 9);
    CHECK(s.budget.tx_power_dbm == 0.0);
    CHECK(s.budget.rx_sensitivity_dbm == -106.0);
    CHECK(s.engine == LaunchConfig{});
    CHECK(s.engine.tessellation_order == 5);
    CHECK(s.engine.max_reflections == 8);
}

TEST_CASE("Scenario errors carry stable codes", "[scenario]")
{
    CHECK(error_code("{") == "syntax-error");
    CHECK(error_code("[]") == "schema-error");
    CHECK(error_code(R"({"name": "x"})") == "schema-error");
    CHECK(error_code(R"({"schema_version": 2})") == "unsupported-schema-version");
    CHECK(error_code(R"({"schema_version": 1, "colour": 3})") == "schema-error");
    CHECK(error_code(R"({"schema_version": 1, "band": {"f_center_hz": "high"}})") == "schema-error");
    CHECK(error_code(R"({"schema_version": 1, "band": {"n_freq_samples": 4}})") == "invalid-value");
    CHECK(error_code(R"({"schema_version": 1, "floor": {"material": {"kind": "dielectric", "eps_r": 0.5}}})") ==
          "invalid-value");
    CHECK(error_code(R"({"schema_version": 1, "shelves": {"boxes": [
        {"min": [1, 1, 0], "max": [3, 3, 2]}, {"min": [2, 2, 1], "max": [4, 4, 3]}]}})") == "overlapping-boxes");
    CHECK(error_code(R"({"schema_version": 1, "shelves": {"boxes": [{"min": [19, 9, 0], "max": [21, 11, 3]}]}})") ==
          "tx-inside-geometry");
    CHECK(error_code(R"({"schema_version": 1, "rx": {"grid": {"x_max": 45}}})") == "grid-outside-floor");
    CHECK(error_code(R"({"schema_version": 1, "shelves": {"boxes": [{"min": [38, 1, 0], "max": [41, 2, 1]}]}})") ==
          "geometry-outside-floor");
    CHECK(error_code(R"({"schema_version": 1, "engine": {"tessellation_order": 12}})") == "invalid-value");
    CHECK(error_code(R"({"schema_version": 1, "tx": {"polarization": "circular"}})") == "invalid-value");

    try
    {
        build_preset("three-shelf");
        FAIL("expected an error");
    }
    catch (const ScenarioError &e)
    {
        CHECK(e.code() == "unknown-preset");
        CHECK(std::string(e.what()).find("two-shelf-center") != std::string::npos);
    }
}

TEST_CASE("Shelf-row presets", "[scenario]")
{
    const ScenarioSpec two = build_preset("two-shelf-center");
    REQUIRE(two.shelves.boxes.size() == 2);
    CHECK(two.shelves.boxes[0].min == Vec3{18.75, 2.0, 0.3});
    CHECK(two.shelves.boxes[0].max == Vec3{19.25, 18.0, 3.3});
    CHECK(two.shelves.boxes[1].min.x == 20.75);
    // 1.5 m between facing shelf sides, TX centred between them
    CHECK(two.shelves.boxes[1].min.x - two.shelves.boxes[0].max.x == Approx(1.5));
    CHECK(two.tx.position == Vec3{20.0, 10.0, 1.5});
    CHECK(build_preset("two-shelf-end").tx.position == Vec3{17.75, 10.0, 1.5});

    const ScenarioSpec sixteen = build_preset("sixteen-shelf-center");
    REQUIRE(sixteen.shelves.boxes.size() == 16);
    for (std::size_t i = 0; i < 16; ++i)
        CHECK(sixteen.shelves.boxes[i].min.x == Approx(4.75 + 2.0 * static_cast<double>(i)));
    CHECK(build_preset("sixteen-shelf-end").tx.position == Vec3{3.75, 10.0, 1.5});
}

TEST_CASE("Cluster presets", "[scenario]")
{
    const ScenarioSpec s = build_preset("four-cluster-center");
    REQUIRE(s.shelves.clusters.size() == 4);
    const auto boxes = s.all_boxes();
    CHECK(boxes.size() == 56);
    const ClusterGenerator &c = s.shelves.clusters[0];
    CHECK(c.footprint_x() == Approx(9.4));
    CHECK(c.footprint_y() == Approx(2.65));
    CHECK(c.origin.x == Approx(9.85));
    CHECK(c.origin.y == Approx(6.6));
    CHECK(s.shelves.clusters[3].origin.x == Approx(20.75));
    CHECK(s.shelves.clusters[3].origin.y == Approx(10.75));
    // 5 cm between neighbouring shelves inside a cluster, lifted 0.3 m
    const auto g = c.generate();
    CHECK(g[1].min.x - g[0].max.x == Approx(0.05));
    CHECK(g[7].min.y - g[0].max.y == Approx(0.05));
    for (const auto &b : boxes)
    {
        CHECK(b.min.z == Approx(0.3));
        CHECK(b.max.z == Approx(2.3));
    }
    CHECK(build_preset("four-cluster-end").tx.position.x == Approx(7.85));
}

TEST_CASE("Polarization and lying presets", "[scenario]")
{
    const Vec3 end = build_preset("four-cluster-end").tx.position;
    const ScenarioSpec hh = build_preset("pol-hh");
    CHECK(hh.tx.antenna.polarization == Polarization::HorizontalTransverse);
    CHECK(hh.rx.antenna.polarization == Polarization::HorizontalTransverse);
    CHECK(hh.tx.position == end);
    const ScenarioSpec hv = build_preset("pol-hv");
    CHECK(hv.tx.antenna.polarization == Polarization::HorizontalTransverse);
    CHECK(hv.rx.antenna.polarization == Polarization::Vertical);
    const ScenarioSpec vh = build_preset("pol-vh");
    CHECK(vh.tx.antenna.polarization == Polarization::Vertical);
    CHECK(vh.rx.antenna.polarization == Polarization::HorizontalTransverse);

    for (const char *name : {"lying-vv", "lying-hv-long", "lying-hv-trans"})
    {
        const ScenarioSpec s = build_preset(name);
        CHECK(s.tx.position == Vec3{end.x, end.y, 0.2});
        CHECK(s.rx.antenna.polarization == Polarization::Vertical);
    }
    CHECK(build_preset("lying-hv-long").tx.antenna.polarization == Polarization::HorizontalLongitudinal);
    CHECK(build_preset("lying-hv-trans").tx.antenna.polarization == Polarization::HorizontalTransverse);
}

TEST_CASE("Scene construction assigns materials", "[scenario]")
{
    const Scene scene = build_scene(build_preset("two-shelf-center"));
    CHECK(scene.surface_material(SurfaceId::floor()) == Material::concrete());
    CHECK(scene.surface_material(SurfaceId::box_face(1, 3)) == Material::pec());
    CHECK(scene.floor()->extent_x == 40.0);
}

TEST_CASE("Every receiver of the presets lies outside the shelves", "[scenario]")
{
    for (const auto &name : preset_names())
    {
        const ScenarioSpec s = build_preset(name);
        const Scene scene = build_scene(s);
        const GridLayout g = s.rx.grid.layout();
        std::size_t inside = 0;
        for (std::size_t j = 0; j < g.ny; ++j)
            for (std::size_t i = 0; i < g.nx; ++i)
                inside += scene.inside_any_box(g.point(i, j)) ? 1 : 0;
        CHECK(inside == 0);
        CHECK(g.nx == 161);
        CHECK(g.ny == 81);
    }
}
