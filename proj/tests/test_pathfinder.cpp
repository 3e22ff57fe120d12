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
#include "oracles.hpp"

#include <uwbrt/pathfinder.hpp>
#include <uwbrt/scenario.hpp>

#include <random>
#include <set>

using namespace uwbrt;
using Catch::Approx;

namespace
{

// Two parallel walls with a 1.5 m gap between x = 0 and x = 1.5; no floor.
Scene two_walls()
{
    return Scene({Aabb{{-0.5, -50.0, -50.0}, {0.0, 50.0, 50.0}, 0}, Aabb{{1.5, -50.0, -50.0}, {2.0, 50.0, 50.0}, 0}},
                 std::nullopt);
}

std::set<Signature> signatures(const std::vector<PropPath> &paths)
{
    std::set<Signature> out;
    for (const auto &p : paths)
        out.insert(p.signature);
    return out;
}

void check_specular_law(const PropPath &p)
{
    REQUIRE(p.segment_lengths.size() == p.interactions.size() + 1);
    double total = 0.0;
    for (double s : p.segment_lengths)
        total += s;
    CHECK(total == Approx(p.total_length).epsilon(1e-12));
    for (const Interaction &it : p.interactions)
    {
        if (it.kind != InteractionKind::Reflection)
            continue;
        CHECK(norm(it.incoming) == Approx(1.0));
        CHECK(norm(it.outgoing) == Approx(1.0));
        // equal angles and coplanarity with the normal
        CHECK(dot(it.outgoing, it.normal) == Approx(-dot(it.incoming, it.normal)).margin(1e-9));
        CHECK(norm(it.outgoing - reflect_direction(it.incoming, it.normal)) < 1e-9);
    }
}

} // namespace

TEST_CASE("Icosphere launch set sizes and spacing", "[pathfinder]")
{
    CHECK(launch_directions(0).directions.size() == 12);
    CHECK(launch_directions(2).directions.size() == 162);
    for (int k = 0; k <= 5; ++k)
    {
        const LaunchSet s = launch_directions(k);
        CHECK(s.directions.size() == 10u * (1u << (2 * k)) + 2u);
        // icosphere has 3(V - 2) edges
        CHECK(s.neighbours.size() == 3 * (s.directions.size() - 2));
        double mean = 0.0;
        for (const auto &e : s.neighbours)
            mean += std::acos(std::clamp(dot(s.directions[e[0]], s.directions[e[1]]), -1.0, 1.0));
        mean /= static_cast<double>(s.neighbours.size());
        CHECK(s.theta_sep <= 1.3 * mean);
        for (const Vec3 &d : s.directions)
            CHECK(norm(d) == Approx(1.0));
    }
    CHECK(launch_directions(5).theta_sep < launch_directions(4).theta_sep);
    CHECK_THROWS_AS(launch_directions(10), ResourceError);
    CHECK_THROWS_AS(launch_directions(-1), std::invalid_argument);
}

TEST_CASE("Free space yields only the direct path", "[pathfinder]")
{
    const Scene empty;
    const Vec3 tx{0.0, 0.0, 0.0}, rx{3.0, 4.0, 0.0};
    const auto paths = trace_sbr(empty, tx, rx, LaunchConfig{});
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].interactions.empty());
    CHECK(paths[0].total_length == Approx(5.0).epsilon(1e-15));
    CHECK(norm(paths[0].departure - Vec3{0.6, 0.8, 0.0}) < 1e-15);
    CHECK(norm(paths[0].arrival - Vec3{0.6, 0.8, 0.0}) < 1e-15);
}

TEST_CASE("Floor gives direct and ground-bounce paths", "[pathfinder]")
{
    const Scene scene({}, FloorPlane{40.0, 20.0, 0}, {Material::concrete()});
    const Vec3 tx{5.0, 10.0, 1.5}, rx{15.0, 10.0, 0.2};
    const auto paths = trace_sbr(scene, tx, rx, LaunchConfig{});
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].total_length == Approx(std::hypot(10.0, 1.3)).epsilon(1e-12));
    CHECK(paths[0].total_length == Approx(10.084).margin(5e-4));
    CHECK(paths[1].total_length == Approx(std::hypot(10.0, 1.7)).epsilon(1e-12));
    CHECK(paths[1].total_length == Approx(10.143).margin(5e-4));
    REQUIRE(paths[1].interactions.size() == 1);
    CHECK(paths[1].interactions[0].surface.is_floor());
    CHECK(paths[1].interactions[0].point.x == Approx(5.0 + 10.0 * 1.5 / 1.7));
    CHECK(paths[1].interactions[0].point.z == 0.0);
    check_specular_law(paths[1]);
}

TEST_CASE("Image method between two walls gives 2N + 1 paths", "[pathfinder]")
{
    const Scene scene = two_walls();
    const Vec3 tx{0.4, 0.0, 0.0}, rx{1.1, 5.0, 0.3};
    for (int n = 0; n <= 6; ++n)
    {
        const auto paths = image_method_paths(scene, tx, rx, n);
        CHECK(paths.size() == static_cast<std::size_t>(2 * n + 1));
        for (const auto &p : paths)
        {
            check_specular_law(p);
            // unfolded length equals the distance to the image
            const std::size_t k = p.interactions.size();
            CHECK(p.total_length > 0.0);
            CHECK(k <= static_cast<std::size_t>(n));
        }
    }
    CHECK_THROWS_AS(image_method_paths(scene, tx, rx, 8, 10), ResourceError);
}

TEST_CASE("SBR and the image method agree between two walls", "[pathfinder]")
{
    const Scene scene = two_walls();
    const Vec3 tx{0.4, 0.0, 0.0}, rx{1.1, 5.0, 0.3};
    LaunchConfig cfg;
    cfg.max_reflections = 5;
    cfg.exhaustive_order = 0;
    const auto sbr = trace_sbr(scene, tx, rx, cfg);
    const auto img = image_method_paths(scene, tx, rx, 5);
    REQUIRE(sbr.size() == img.size());
    for (std::size_t i = 0; i < sbr.size(); ++i)
    {
        CHECK(sbr[i].signature == img[i].signature);
        CHECK(sbr[i].total_length == Approx(img[i].total_length).epsilon(1e-12));
    }
}

TEST_CASE("SBR paths are valid image-method paths", "[pathfinder][property]")
{
    const Scene scene = build_scene(build_preset("two-shelf-center"));
    const Vec3 tx{20.0, 10.0, 1.5};
    LaunchConfig cfg;
    cfg.max_reflections = 3;
    cfg.tessellation_order = 4;
    cfg.exhaustive_order = 0;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ux(1.0, 39.0), uy(1.0, 19.0);
    for (int trial = 0; trial < 10; ++trial)
    {
        const Vec3 rx{ux(rng), uy(rng), 0.2};
        const auto sbr = trace_sbr(scene, tx, rx, cfg);
        const auto img = signatures(image_method_paths(scene, tx, rx, 3));
        for (const auto &p : sbr)
        {
            CHECK(img.count(p.signature) == 1);
            check_specular_law(p);
        }
    }
}

TEST_CASE("Exhaustive first order adds reflections missed near face edges", "[pathfinder]")
{
    const Scene scene = build_scene(build_preset("two-shelf-center"));
    const Vec3 tx{20.0, 10.0, 1.5};
    LaunchConfig cfg;
    cfg.tessellation_order = 3;
    cfg.max_reflections = 2;
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ux(1.0, 39.0), uy(1.0, 19.0);
    for (int trial = 0; trial < 10; ++trial)
    {
        const Vec3 rx{ux(rng), uy(rng), 0.2};
        const auto all = signatures(find_specular_paths(scene, tx, rx, cfg));
        for (const auto &p : image_method_paths(scene, tx, rx, 1))
            CHECK(all.count(p.signature) == 1);
        for (const auto &p : trace_sbr(scene, tx, rx, cfg))
            CHECK(all.count(p.signature) == 1);
    }
}

TEST_CASE("Grid capture equals per-point capture", "[pathfinder]")
{
    const Scene scene = build_scene(build_preset("two-shelf-end"));
    LaunchConfig cfg;
    cfg.tessellation_order = 3;
    cfg.max_reflections = 4;
    const SbrTree tree(scene, {17.75, 10.0, 1.5}, cfg);
    const GridLayout g{0.0, 0.0, 1.7, 24, 12, 0.2};
    const auto grid = tree.captured_grid(g);
    REQUIRE(grid.size() == g.nx * g.ny);
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i)
            CHECK(grid[j * g.nx + i] == tree.captured(g.point(i, j)));
}

TEST_CASE("Trace rejects endpoints inside geometry", "[pathfinder]")
{
    const Scene scene = two_walls();
    CHECK_THROWS_AS(trace_sbr(scene, {-0.2, 0.0, 0.0}, {1.0, 0.0, 0.0}, LaunchConfig{}), std::invalid_argument);
}

TEST_CASE("Keller point matches a numerical path-length minimum", "[pathfinder][property]")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    int found = 0;
    for (int trial = 0; trial < 500; ++trial)
    {
        const Vec3 a{u(rng), u(rng), u(rng)};
        const Vec3 e = normalized(Vec3{u(rng), u(rng), u(rng)});
        const double len = 8.0;
        const Vec3 src{u(rng), u(rng), u(rng)}, obs{u(rng), u(rng), u(rng)};
        const auto q = DiffractionTracer::keller_point(a, e, len, src, obs);
        const Vec3 want = oracle::keller_golden(a, a + e * len, src, obs);
        const double t_want = dot(want - a, e);
        if (!q)
        {
            // the minimum lies at (or numerically at) an end of the segment
            CHECK((t_want < 1e-3 || t_want > len - 1e-3));
            continue;
        }
        ++found;
        CHECK(norm(*q - want) < 1e-6);
        // equal angles with the edge on both legs
        CHECK(dot(normalized(*q - src), e) == Approx(dot(normalized(obs - *q), e)).margin(1e-9));
    }
    CHECK(found > 100);
}

TEST_CASE("Diffraction paths around a single box", "[pathfinder]")
{
    const Scene scene({Aabb{{-1.0, -1.0, 0.0}, {1.0, 1.0, 2.0}, 0}}, std::nullopt);
    // receiver round the corner: the vertical edge at (-1, 1) is seen from both ends
    const Vec3 tx{-3.0, 0.2, 1.0}, rx{0.3, 3.0, 1.2};
    LaunchConfig cfg;
    cfg.max_reflections_with_diffraction = 0;
    const auto paths = find_diffraction_paths(scene, tx, rx, cfg);
    REQUIRE_FALSE(paths.empty());
    bool corner = false;
    for (const auto &p : paths)
        corner = corner || (std::abs(p.interactions[0].point.x + 1.0) < 1e-12 &&
                            std::abs(p.interactions[0].point.y - 1.0) < 1e-12);
    CHECK(corner);
    for (const auto &p : paths)
    {
        REQUIRE(p.interactions.size() == 1);
        const Interaction &d = p.interactions[0];
        CHECK(d.kind == InteractionKind::Diffraction);
        const Vec3 e = d.edge.direction();
        CHECK(dot(normalized(d.point - tx), e) == Approx(dot(normalized(rx - d.point), e)).margin(1e-9));
        CHECK_FALSE(segment_occluded(scene, tx, d.point));
        CHECK_FALSE(segment_occluded(scene, d.point, rx));
    }
    // a receiver behind the box sees no single-edge path through the block
    CHECK(find_diffraction_paths(scene, tx, {3.0, -0.1, 1.2}, cfg).empty());

    LaunchConfig tight = cfg;
    tight.enumeration_budget = 5;
    CHECK_THROWS_AS(find_diffraction_paths(scene, tx, rx, tight), ResourceError);
}

TEST_CASE("Merging keeps one path per signature in order", "[pathfinder]")
{
    const Scene scene = two_walls();
    const Vec3 tx{0.4, 0.0, 0.0}, rx{1.1, 5.0, 0.3};
    const auto a = image_method_paths(scene, tx, rx, 2);
    const auto b = image_method_paths(scene, tx, rx, 3);
    const auto m = merge_paths(a, b);
    CHECK(m.size() == b.size());
    CHECK(std::is_sorted(m.begin(), m.end(), signature_less));
}
