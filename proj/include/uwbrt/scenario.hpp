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

#ifndef UWBRT_SCENARIO_HPP
#define UWBRT_SCENARIO_HPP

#include "antenna.hpp"
#include "geometry.hpp"
#include "link.hpp"
#include "materials.hpp"
#include "pathfinder.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uwbrt
{

inline constexpr int kScenarioSchemaVersion = 1;

// Error codes: syntax-error, schema-error, invalid-value, unsupported-schema-version, unknown-preset,
// overlapping-boxes, tx-inside-geometry, grid-outside-floor, geometry-outside-floor.
class ScenarioError : public std::runtime_error
{
  public:
    ScenarioError(std::string code, const std::string &message)
        : std::runtime_error(code + ": " + message), code_(std::move(code))
    {
    }
    const std::string &code() const { return code_; }

  private:
    std::string code_;
};

struct FloorSpec
{
    double extent_x = 40.0;
    double extent_y = 20.0;
    double thickness = 0.3; // kept for slab models; the floor reflects as a half-space
    Material material = Material::concrete();

    bool operator==(const FloorSpec &) const = default;
};

// rows run along y, cols along x; origin is the (min x, min y) corner of the footprint at floor level.
struct ClusterGenerator
{
    Vec3 origin;
    int rows = 2;
    int cols = 7;
    Vec3 shelf_size{1.3, 1.3, 2.0};
    double gap = 0.05;
    double clearance = 0.3;

    bool operator==(const ClusterGenerator &) const = default;

    double footprint_x() const { return cols * shelf_size.x + (cols - 1) * gap; }
    double footprint_y() const { return rows * shelf_size.y + (rows - 1) * gap; }

    std::vector<Aabb> generate(std::size_t material_id = 1) const
    {
        std::vector<Aabb> out;
        out.reserve(static_cast<std::size_t>(rows * cols));
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c)
            {
                Aabb b;
                b.min = {origin.x + c * (shelf_size.x + gap), origin.y + r * (shelf_size.y + gap),
                         origin.z + clearance};
                b.max = b.min + shelf_size;
                b.material_id = material_id;
                out.push_back(b);
            }
        return out;
    }
};

struct ShelvesSpec
{
    Material material = Material::pec();
    std::vector<Aabb> boxes; // material_id is assigned when the scene is built
    std::vector<ClusterGenerator> clusters;

    bool operator==(const ShelvesSpec &) const = default;
};

struct AntennaParams
{
    Polarization polarization = Polarization::Vertical;
    double gain_max_dbi = kDefaultGainMaxDbi;
    double pattern_exponent = kDefaultPatternExponent;

    bool operator==(const AntennaParams &) const = default;
};

struct TxSpec
{
    Vec3 position{20.0, 10.0, 1.5};
    AntennaParams antenna;

    bool operator==(const TxSpec &) const = default;
};

struct RxSpec
{
    RxGrid grid;
    AntennaParams antenna;

    bool operator==(const RxSpec &) const = default;
};

struct ScenarioSpec
{
    std::string name = "custom";
    FloorSpec floor;
    ShelvesSpec shelves;
    TxSpec tx;
    RxSpec rx;
    BandConfig band;
    LinkBudget budget;
    LaunchConfig engine;

    bool operator==(const ScenarioSpec &) const = default;

    // Explicit boxes followed by generated clusters, in declaration order.
    std::vector<Aabb> all_boxes() const
    {
        std::vector<Aabb> out;
        for (Aabb b : shelves.boxes)
        {
            b.material_id = 1;
            out.push_back(b);
        }
        for (const auto &c : shelves.clusters)
        {
            const auto g = c.generate(1);
            out.insert(out.end(), g.begin(), g.end());
        }
        return out;
    }
};

/// Scene with material table {floor, shelves}.
inline Scene build_scene(const ScenarioSpec &s)
{
    FloorPlane floor{s.floor.extent_x, s.floor.extent_y, 0};
    return Scene(s.all_boxes(), floor, {s.floor.material, s.shelves.material});
}

/// Antenna model with the max gain lowered if the pattern would otherwise radiate more than it is fed.
inline AntennaSpec make_antenna(const Vec3 &position, const AntennaParams &p)
{
    return make_antenna(position, p.polarization, consistent_gain_max_dbi(p.gain_max_dbi, p.pattern_exponent),
                        p.pattern_exponent);
}

inline AntennaSpec tx_antenna(const ScenarioSpec &s) { return make_antenna(s.tx.position, s.tx.antenna); }

inline AntennaSpec rx_antenna_template(const ScenarioSpec &s)
{
    return make_antenna(Vec3{0.0, 0.0, s.rx.grid.height}, s.rx.antenna);
}

/// Throws ScenarioError on the first violated constraint.
inline void validate_scenario(const ScenarioSpec &s)
{
    auto bad = [](const char *code, const std::string &msg) { throw ScenarioError(code, msg); };
    const auto &f = s.floor;
    if (!(f.extent_x > 0.0) || !(f.extent_y > 0.0) || !(f.thickness >= 0.0))
        bad("invalid-value", "floor extents must be positive and thickness non-negative");
    if (f.material.kind == MaterialKind::Dielectric && (!(f.material.eps_r >= 1.0) || !(f.material.sigma >= 0.0)))
        bad("invalid-value", "floor material needs eps_r >= 1 and sigma >= 0");
    if (s.shelves.material.kind == MaterialKind::Dielectric)
        bad("invalid-value", "shelves must be perfect conductors");
    for (const auto &c : s.shelves.clusters)
        if (c.rows < 1 || c.cols < 1 || !(c.shelf_size.x > 0.0 && c.shelf_size.y > 0.0 && c.shelf_size.z > 0.0) ||
            !(c.gap >= 0.0) || !(c.clearance >= 0.0))
            bad("invalid-value", "cluster needs rows, cols >= 1, positive shelf size, gap and clearance >= 0");
    const auto boxes = s.all_boxes();
    for (std::size_t i = 0; i < boxes.size(); ++i)
    {
        const Aabb &b = boxes[i];
        if (!(b.min.x < b.max.x && b.min.y < b.max.y && b.min.z < b.max.z))
            bad("invalid-value", "box " + std::to_string(i) + " has min not below max");
        if (b.min.x < 0.0 || b.min.y < 0.0 || b.min.z < 0.0 || b.max.x > f.extent_x || b.max.y > f.extent_y)
            bad("geometry-outside-floor", "box " + std::to_string(i) + " extends beyond the floor");
        for (std::size_t j = 0; j < i; ++j)
            if (b.overlaps(boxes[j]))
                bad("overlapping-boxes", "boxes " + std::to_string(j) + " and " + std::to_string(i) + " overlap");
    }
    const Vec3 &t = s.tx.position;
    if (!(t.z > 0.0))
        bad("invalid-value", "tx must be above the floor");
    if (t.x < 0.0 || t.y < 0.0 || t.x > f.extent_x || t.y > f.extent_y)
        bad("geometry-outside-floor", "tx lies outside the floor extent");
    for (std::size_t i = 0; i < boxes.size(); ++i)
        if (boxes[i].contains(t))
            bad("tx-inside-geometry", "tx lies inside box " + std::to_string(i));
    const RxGrid &g = s.rx.grid;
    if (!(g.spacing > 0.0) || !(g.height > 0.0) || !(g.x_max >= g.x_min) || !(g.y_max >= g.y_min))
        bad("invalid-value", "grid needs spacing > 0, height > 0 and max >= min");
    if (g.x_min < 0.0 || g.y_min < 0.0 || g.x_max > f.extent_x || g.y_max > f.extent_y)
        bad("grid-outside-floor", "receiver grid extends beyond the floor");
    for (const AntennaParams *a : {&s.tx.antenna, &s.rx.antenna})
        if (!std::isfinite(a->gain_max_dbi) || !(a->pattern_exponent > 0.0))
            bad("invalid-value", "antenna needs finite gain and positive pattern exponent");
    const auto &b = s.band;
    if (!(b.f_center > 0.0) || !(b.bandwidth >= 0.0) || b.bandwidth >= 2.0 * b.f_center || b.n_freq_samples < 1 ||
        b.n_freq_samples % 2 == 0)
        bad("invalid-value", "band needs f_center > 0, 0 <= bandwidth < 2 f_center, odd n_freq_samples >= 1");
    if (!std::isfinite(s.budget.tx_power_dbm) || !std::isfinite(s.budget.rx_sensitivity_dbm))
        bad("invalid-value", "budget values must be finite");
    const auto &e = s.engine;
    if (e.tessellation_order < 0 || e.tessellation_order > 9 || e.max_reflections < 0 ||
        e.max_reflections_with_diffraction < 0 || e.exhaustive_order < 0 ||
        e.candidate_share_radius < 0 || e.enumeration_budget == 0)
        bad("invalid-value", "engine needs tessellation_order in [0, 9], non-negative reflection limits, budget > 0");
}

// ------------------------------------------------------------------------------------------------
// Presets
// ------------------------------------------------------------------------------------------------

inline const std::vector<std::string> &preset_names()
{
    static const std::vector<std::string> names = {
        "two-shelf-center",    "two-shelf-end",       "sixteen-shelf-center", "sixteen-shelf-end",
        "four-cluster-center", "four-cluster-end",    "pol-hh",               "pol-hv",
        "pol-vh",              "lying-vv",            "lying-hv-long",        "lying-hv-trans"};
    return names;
}

namespace detail
{

// Rows of 0.5 m thick, 16 m long, 3 m tall shelves with 1.5 m between faces, centred on the floor.
inline std::vector<Aabb> shelf_row(int count, const FloorSpec &f)
{
    const double thick = 0.5, gap = 1.5, length = 16.0, height = 3.0, clearance = 0.3;
    const double span = count * thick + (count - 1) * gap;
    const double x0 = 0.5 * (f.extent_x - span);
    const double y0 = 0.5 * (f.extent_y - length);
    std::vector<Aabb> out;
    for (int i = 0; i < count; ++i)
    {
        const double x = x0 + i * (thick + gap);
        out.push_back({{x, y0, clearance}, {x + thick, y0 + length, clearance + height}, 1});
    }
    return out;
}

// Four 7 x 2 clusters in a 2 x 2 layout with 1.5 m corridors, centred on the floor.
inline std::vector<ClusterGenerator> four_clusters(const FloorSpec &f)
{
    ClusterGenerator proto;
    const double corridor = 1.5;
    const double cx = 0.5 * f.extent_x, cy = 0.5 * f.extent_y;
    const double xs[2] = {cx - 0.5 * corridor - proto.footprint_x(), cx + 0.5 * corridor};
    const double ys[2] = {cy - 0.5 * corridor - proto.footprint_y(), cy + 0.5 * corridor};
    std::vector<ClusterGenerator> out;
    for (double y : ys)
        for (double x : xs)
        {
            ClusterGenerator c = proto;
            c.origin = {x, y, 0.0};
            out.push_back(c);
        }
    return out;
}

inline AntennaParams pol(Polarization p) { return AntennaParams{p}; }

} // namespace detail

/// One of the named reference scenarios.
inline ScenarioSpec build_preset(std::string_view name)
{
    ScenarioSpec s;
    s.name = std::string(name);
    const FloorSpec &f = s.floor;
    const double cx = 0.5 * f.extent_x, cy = 0.5 * f.extent_y;
    const double standing = 1.5, lying = 0.2;
    const Polarization V = Polarization::Vertical, H = Polarization::HorizontalTransverse;

    auto four_cluster = [&](bool end) {
        s.shelves.clusters = detail::four_clusters(f);
        const double left = s.shelves.clusters.front().origin.x;
        s.tx.position = end ? Vec3{left - 2.0, cy, standing} : Vec3{cx, cy, standing};
    };

    if (name == "two-shelf-center" || name == "two-shelf-end" || name == "sixteen-shelf-center" ||
        name == "sixteen-shelf-end")
    {
        const bool two = name.starts_with("two");
        s.shelves.boxes = detail::shelf_row(two ? 2 : 16, f);
        const bool end = name.ends_with("end");
        s.tx.position = end ? Vec3{s.shelves.boxes.front().min.x - 1.0, cy, standing} : Vec3{cx, cy, standing};
    }
    else if (name == "four-cluster-center" || name == "four-cluster-end")
    {
        four_cluster(name.ends_with("end"));
    }
    else if (name == "pol-hh" || name == "pol-hv" || name == "pol-vh")
    {
        four_cluster(true);
        s.tx.antenna = detail::pol(name[4] == 'h' ? H : V);
        s.rx.antenna = detail::pol(name[5] == 'h' ? H : V);
    }
    else if (name == "lying-vv" || name == "lying-hv-long" || name == "lying-hv-trans")
    {
        four_cluster(true);
        s.tx.position.z = lying;
        if (name == "lying-hv-long")
            s.tx.antenna = detail::pol(Polarization::HorizontalLongitudinal);
        else if (name == "lying-hv-trans")
            s.tx.antenna = detail::pol(Polarization::HorizontalTransverse);
    }
    else
    {
        std::string list;
        for (const auto &n : preset_names())
            list += (list.empty() ? "" : ", ") + n;
        throw ScenarioError("unknown-preset", "unknown preset '" + std::string(name) + "'; valid presets: " + list);
    }
    validate_scenario(s);
    return s;
}

// ------------------------------------------------------------------------------------------------
// Scenario files (JSON)
// ------------------------------------------------------------------------------------------------

namespace detail
{

using ojson = nlohmann::ordered_json;

inline ojson vec_to_json(const Vec3 &v) { return ojson::array({v.x, v.y, v.z}); }

inline ojson material_to_json(const Material &m)
{
    if (m.kind == MaterialKind::Pec)
        return ojson{{"kind", "pec"}};
    return ojson{{"kind", "dielectric"}, {"eps_r", m.eps_r}, {"sigma", m.sigma}};
}

inline ojson antenna_to_json(const AntennaParams &a)
{
    return ojson{{"polarization", std::string(to_string(a.polarization))},
                 {"gain_max_dbi", a.gain_max_dbi},
                 {"pattern_exponent", a.pattern_exponent}};
}

inline std::string_view to_string(BandWeighting w) { return w == BandWeighting::Uniform ? "uniform" : "gaussian"; }
inline std::string_view to_string(LegReflectors r) { return r == LegReflectors::Floor ? "floor" : "all-faces"; }

// Reads one object, rejecting keys outside the allowed set.
class Reader
{
  public:
    Reader(const ojson &j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j.is_object())
            fail("schema-error", "expected an object");
    }

    void allow(std::initializer_list<const char *> keys) const
    {
        std::set<std::string> ok(keys.begin(), keys.end());
        for (const auto &[k, v] : j_.items())
            if (!ok.count(k))
                fail("schema-error", "unknown key '" + k + "'");
    }

    bool has(const char *key) const { return j_.contains(key); }
    const ojson &at(const char *key) const { return j_.at(key); }
    std::string child(const char *key) const { return path_ + "." + key; }

    double number(const char *key, double def) const
    {
        if (!has(key))
            return def;
        const auto &v = j_.at(key);
        if (!v.is_number())
            fail("schema-error", std::string("'") + key + "' must be a number");
        return v.get<double>();
    }
    std::int64_t integer(const char *key, std::int64_t def) const
    {
        if (!has(key))
            return def;
        const auto &v = j_.at(key);
        if (!v.is_number_integer())
            fail("schema-error", std::string("'") + key + "' must be an integer");
        return v.get<std::int64_t>();
    }
    bool boolean(const char *key, bool def) const
    {
        if (!has(key))
            return def;
        const auto &v = j_.at(key);
        if (!v.is_boolean())
            fail("schema-error", std::string("'") + key + "' must be a boolean");
        return v.get<bool>();
    }
    std::string string(const char *key, const std::string &def) const
    {
        if (!has(key))
            return def;
        const auto &v = j_.at(key);
        if (!v.is_string())
            fail("schema-error", std::string("'") + key + "' must be a string");
        return v.get<std::string>();
    }
    Vec3 vec(const char *key, const Vec3 &def) const
    {
        if (!has(key))
            return def;
        const auto &v = j_.at(key);
        if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
            fail("schema-error", std::string("'") + key + "' must be an array of 3 numbers");
        return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }

    [[noreturn]] void fail(const char *code, const std::string &msg) const
    {
        throw ScenarioError(code, path_ + ": " + msg);
    }

  private:
    const ojson &j_;
    std::string path_;
};

inline Material read_material(const ojson &j, const std::string &path, const Material &def)
{
    Reader r(j, path);
    r.allow({"kind", "eps_r", "sigma"});
    const std::string kind = r.string("kind", def.kind == MaterialKind::Pec ? "pec" : "dielectric");
    if (kind == "pec")
        return Material::pec();
    if (kind != "dielectric")
        r.fail("invalid-value", "material kind must be 'pec' or 'dielectric'");
    Material m{MaterialKind::Dielectric, r.number("eps_r", def.eps_r), r.number("sigma", def.sigma)};
    if (!(m.eps_r >= 1.0) || !(m.sigma >= 0.0))
        r.fail("invalid-value", "material needs eps_r >= 1 and sigma >= 0");
    return m;
}

inline AntennaParams read_antenna(const Reader &r, const AntennaParams &def)
{
    AntennaParams a = def;
    const std::string p = r.string("polarization", std::string(to_string(def.polarization)));
    const auto parsed = polarization_from_string(p);
    if (!parsed)
        r.fail("invalid-value", "unknown polarization '" + p + "'");
    a.polarization = *parsed;
    a.gain_max_dbi = r.number("gain_max_dbi", def.gain_max_dbi);
    a.pattern_exponent = r.number("pattern_exponent", def.pattern_exponent);
    return a;
}

} // namespace detail

/// Canonical JSON text: fixed key order, two-space indent, trailing newline.
inline std::string serialize_scenario(const ScenarioSpec &s)
{
    using detail::ojson;
    ojson j;
    j["schema_version"] = kScenarioSchemaVersion;
    j["name"] = s.name;
    j["floor"] = ojson{{"extent_x", s.floor.extent_x},
                       {"extent_y", s.floor.extent_y},
                       {"thickness", s.floor.thickness},
                       {"material", detail::material_to_json(s.floor.material)}};
    ojson boxes = ojson::array();
    for (const auto &b : s.shelves.boxes)
        boxes.push_back(ojson{{"min", detail::vec_to_json(b.min)}, {"max", detail::vec_to_json(b.max)}});
    ojson clusters = ojson::array();
    for (const auto &c : s.shelves.clusters)
        clusters.push_back(ojson{{"origin", detail::vec_to_json(c.origin)},
                                 {"rows", c.rows},
                                 {"cols", c.cols},
                                 {"shelf_size", detail::vec_to_json(c.shelf_size)},
                                 {"gap", c.gap},
                                 {"clearance", c.clearance}});
    j["shelves"] = ojson{
        {"material", detail::material_to_json(s.shelves.material)}, {"boxes", boxes}, {"clusters", clusters}};
    ojson tx;
    tx["position"] = detail::vec_to_json(s.tx.position);
    tx.update(detail::antenna_to_json(s.tx.antenna));
    j["tx"] = tx;
    const RxGrid &g = s.rx.grid;
    ojson rx;
    rx["grid"] = ojson{{"x_min", g.x_min}, {"x_max", g.x_max},     {"y_min", g.y_min},
                       {"y_max", g.y_max}, {"spacing", g.spacing}, {"height", g.height}};
    rx.update(detail::antenna_to_json(s.rx.antenna));
    j["rx"] = rx;
    j["band"] = ojson{{"f_center_hz", s.band.f_center},
                      {"bandwidth_hz", s.band.bandwidth},
                      {"n_freq_samples", s.band.n_freq_samples},
                      {"weighting", std::string(detail::to_string(s.band.weighting))}};
    j["budget"] = ojson{{"tx_power_dbm", s.budget.tx_power_dbm}, {"rx_sensitivity_dbm", s.budget.rx_sensitivity_dbm}};
    j["engine"] = ojson{{"tessellation_order", s.engine.tessellation_order},
                        {"max_reflections", s.engine.max_reflections},
                        {"enable_diffraction", s.engine.enable_diffraction},
                        {"max_reflections_with_diffraction", s.engine.max_reflections_with_diffraction},
                        {"diffraction_leg_reflectors", std::string(detail::to_string(s.engine.leg_reflectors))},
                        {"exhaustive_order", s.engine.exhaustive_order},
                        {"candidate_share_radius", s.engine.candidate_share_radius},
                        {"enumeration_budget", s.engine.enumeration_budget}};
    return j.dump(2) + "\n";
}

/// Parses and validates a scenario file; omitted sections take their defaults.
inline ScenarioSpec parse_scenario(std::string_view text)
{
    using detail::ojson;
    using detail::Reader;
    ojson j;
    try
    {
        j = ojson::parse(text.begin(), text.end());
    }
    catch (const nlohmann::json::parse_error &e)
    {
        throw ScenarioError("syntax-error", e.what());
    }
    Reader root(j, "$");
    root.allow({"schema_version", "name", "floor", "shelves", "tx", "rx", "band", "budget", "engine"});
    if (!root.has("schema_version"))
        root.fail("schema-error", "missing 'schema_version'");
    const auto version = root.integer("schema_version", 0);
    if (version != kScenarioSchemaVersion)
        throw ScenarioError("unsupported-schema-version",
                            "schema_version " + std::to_string(version) + " is not supported (expected " +
                                std::to_string(kScenarioSchemaVersion) + ")");
    ScenarioSpec s;
    s.name = root.string("name", s.name);

    if (root.has("floor"))
    {
        Reader r(root.at("floor"), root.child("floor"));
        r.allow({"extent_x", "extent_y", "thickness", "material"});
        s.floor.extent_x = r.number("extent_x", s.floor.extent_x);
        s.floor.extent_y = r.number("extent_y", s.floor.extent_y);
        s.floor.thickness = r.number("thickness", s.floor.thickness);
        if (r.has("material"))
            s.floor.material = detail::read_material(r.at("material"), r.child("material"), s.floor.material);
        s.rx.grid.x_max = s.floor.extent_x;
        s.rx.grid.y_max = s.floor.extent_y;
        s.tx.position = {0.5 * s.floor.extent_x, 0.5 * s.floor.extent_y, s.tx.position.z};
    }
    if (root.has("shelves"))
    {
        Reader r(root.at("shelves"), root.child("shelves"));
        r.allow({"material", "boxes", "clusters"});
        if (r.has("material"))
            s.shelves.material = detail::read_material(r.at("material"), r.child("material"), s.shelves.material);
        auto list = [&](const char *key) -> const ojson & {
            const ojson &v = r.at(key);
            if (!v.is_array())
                r.fail("schema-error", std::string("'") + key + "' must be an array");
            return v;
        };
        if (r.has("boxes"))
        {
            const ojson &arr = list("boxes");
            for (std::size_t i = 0; i < arr.size(); ++i)
            {
                Reader b(arr[i], r.child("boxes") + "[" + std::to_string(i) + "]");
                b.allow({"min", "max"});
                if (!b.has("min") || !b.has("max"))
                    b.fail("schema-error", "box needs 'min' and 'max'");
                s.shelves.boxes.push_back({b.vec("min", {}), b.vec("max", {}), 1});
            }
        }
        if (r.has("clusters"))
        {
            const ojson &arr = list("clusters");
            for (std::size_t i = 0; i < arr.size(); ++i)
            {
                Reader c(arr[i], r.child("clusters") + "[" + std::to_string(i) + "]");
                c.allow({"origin", "rows", "cols", "shelf_size", "gap", "clearance"});
                if (!c.has("origin"))
                    c.fail("schema-error", "cluster needs 'origin'");
                ClusterGenerator g;
                g.origin = c.vec("origin", {});
                g.rows = static_cast<int>(c.integer("rows", g.rows));
                g.cols = static_cast<int>(c.integer("cols", g.cols));
                g.shelf_size = c.vec("shelf_size", g.shelf_size);
                g.gap = c.number("gap", g.gap);
                g.clearance = c.number("clearance", g.clearance);
                s.shelves.clusters.push_back(g);
            }
        }
    }
    if (root.has("tx"))
    {
        Reader r(root.at("tx"), root.child("tx"));
        r.allow({"position", "polarization", "gain_max_dbi", "pattern_exponent"});
        s.tx.position = r.vec("position", s.tx.position);
        s.tx.antenna = detail::read_antenna(r, s.tx.antenna);
    }
    if (root.has("rx"))
    {
        Reader r(root.at("rx"), root.child("rx"));
        r.allow({"grid", "polarization", "gain_max_dbi", "pattern_exponent"});
        if (r.has("grid"))
        {
            Reader g(r.at("grid"), r.child("grid"));
            g.allow({"x_min", "x_max", "y_min", "y_max", "spacing", "height"});
            RxGrid &grid = s.rx.grid;
            grid.x_min = g.number("x_min", grid.x_min);
            grid.x_max = g.number("x_max", grid.x_max);
            grid.y_min = g.number("y_min", grid.y_min);
            grid.y_max = g.number("y_max", grid.y_max);
            grid.spacing = g.number("spacing", grid.spacing);
            grid.height = g.number("height", grid.height);
        }
        s.rx.antenna = detail::read_antenna(r, s.rx.antenna);
    }
    if (root.has("band"))
    {
        Reader r(root.at("band"), root.child("band"));
        r.allow({"f_center_hz", "bandwidth_hz", "n_freq_samples", "weighting"});
        s.band.f_center = r.number("f_center_hz", s.band.f_center);
        s.band.bandwidth = r.number("bandwidth_hz", s.band.bandwidth);
        s.band.n_freq_samples = static_cast<int>(r.integer("n_freq_samples", s.band.n_freq_samples));
        const std::string w = r.string("weighting", "uniform");
        if (w == "uniform")
            s.band.weighting = BandWeighting::Uniform;
        else if (w == "gaussian")
            s.band.weighting = BandWeighting::Gaussian;
        else
            r.fail("invalid-value", "weighting must be 'uniform' or 'gaussian'");
    }
    if (root.has("budget"))
    {
        Reader r(root.at("budget"), root.child("budget"));
        r.allow({"tx_power_dbm", "rx_sensitivity_dbm"});
        s.budget.tx_power_dbm = r.number("tx_power_dbm", s.budget.tx_power_dbm);
        s.budget.rx_sensitivity_dbm = r.number("rx_sensitivity_dbm", s.budget.rx_sensitivity_dbm);
    }
    if (root.has("engine"))
    {
        Reader r(root.at("engine"), root.child("engine"));
        r.allow({"tessellation_order", "max_reflections", "enable_diffraction", "max_reflections_with_diffraction",
                 "diffraction_leg_reflectors", "exhaustive_order", "candidate_share_radius",
                 "enumeration_budget"});
        LaunchConfig &e = s.engine;
        e.tessellation_order = static_cast<int>(r.integer("tessellation_order", e.tessellation_order));
        e.max_reflections = static_cast<int>(r.integer("max_reflections", e.max_reflections));
        e.enable_diffraction = r.boolean("enable_diffraction", e.enable_diffraction);
        e.max_reflections_with_diffraction =
            static_cast<int>(r.integer("max_reflections_with_diffraction", e.max_reflections_with_diffraction));
        const std::string legs = r.string("diffraction_leg_reflectors", "floor");
        if (legs == "floor")
            e.leg_reflectors = LegReflectors::Floor;
        else if (legs == "all-faces")
            e.leg_reflectors = LegReflectors::AllFaces;
        else
            r.fail("invalid-value", "diffraction_leg_reflectors must be 'floor' or 'all-faces'");
        e.exhaustive_order = static_cast<int>(r.integer("exhaustive_order", e.exhaustive_order));
        e.candidate_share_radius = static_cast<int>(r.integer("candidate_share_radius", e.candidate_share_radius));
        const auto budget = r.integer("enumeration_budget", static_cast<std::int64_t>(e.enumeration_budget));
        if (budget <= 0)
            r.fail("invalid-value", "enumeration_budget must be positive");
        e.enumeration_budget = static_cast<std::uint64_t>(budget);
    }
    validate_scenario(s);
    return s;
}

/// FNV-1a 64-bit hash of the canonical serialization.
inline std::uint64_t scenario_hash(const ScenarioSpec &s)
{
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : serialize_scenario(s))
    {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace uwbrt

#endif
