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

#ifndef UWBRT_PATHFINDER_HPP
#define UWBRT_PATHFINDER_HPP

#include "diffraction.hpp"
#include "geometry.hpp"
#include "materials.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace uwbrt
{

// Thrown when a path enumeration would exceed its combinatorial budget.
class ResourceError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum class LegReflectors
{
    Floor,   // reflections on diffraction legs use the floor only
    AllFaces // every box face and the floor (small scenes)
};

struct LaunchConfig
{
    int tessellation_order = 5;
    int max_reflections = 8;
    bool enable_diffraction = true;
    int max_reflections_with_diffraction = 2;
    LegReflectors leg_reflectors = LegReflectors::Floor;
    int exhaustive_order = 1; // reflection orders also enumerated by images, closing SBR gaps at face edges
    int candidate_share_radius = 1; // grid cells whose captured sequences are also refined at a receiver
    std::uint64_t enumeration_budget = 5'000'000;

    bool operator==(const LaunchConfig &) const = default;
};

enum class InteractionKind : std::uint8_t
{
    Reflection = 0,
    Diffraction = 1
};

struct Interaction
{
    InteractionKind kind = InteractionKind::Reflection;
    Vec3 point;
    Vec3 incoming; // unit direction of the segment arriving here
    Vec3 outgoing; // unit direction of the segment leaving
    // reflection data
    SurfaceId surface;
    Vec3 normal;
    Material material;
    // diffraction data
    std::int32_t edge_id = -1;
    EdgeSpec edge;
};

struct SignatureElement
{
    InteractionKind kind;
    std::int32_t id; // surface code or edge index

    auto operator<=>(const SignatureElement &) const = default;
};

using Signature = std::vector<SignatureElement>;

struct PropPath
{
    std::vector<Interaction> interactions;
    std::vector<double> segment_lengths;
    double total_length = 0.0;
    Vec3 departure; // unit, leaving the transmitter
    Vec3 arrival;   // unit, arriving at the receiver
    Signature signature;

    std::optional<std::size_t> diffraction_index() const
    {
        for (std::size_t i = 0; i < interactions.size(); ++i)
            if (interactions[i].kind == InteractionKind::Diffraction)
                return i;
        return std::nullopt;
    }
};

inline bool signature_less(const PropPath &a, const PropPath &b) { return a.signature < b.signature; }

// ------------------------------------------------------------------------------------------------
// Launch directions
// ------------------------------------------------------------------------------------------------

struct LaunchSet
{
    std::vector<Vec3> directions;
    std::vector<std::array<std::uint32_t, 2>> neighbours; // icosphere edges
    double theta_sep = 0.0;                                 // largest angle between adjacent directions (rad)
};

/// Icosphere vertices after `order` midpoint subdivisions (10 * 4^order + 2 directions).
inline LaunchSet launch_directions(int order)
{
    if (order < 0)
        throw std::invalid_argument("launch_directions: order must be non-negative");
    if (order > 9)
        throw ResourceError("launch_directions: tessellation order above 9 is not supported");
    const double p = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                           {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
    for (auto &x : v)
        x = normalized(x);
    std::vector<std::array<std::uint32_t, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
        {3, 8, 9},   {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (int level = 0; level < order; ++level)
    {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoint;
        auto mid = [&](std::uint32_t a, std::uint32_t b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end())
                return it->second;
            const auto idx = static_cast<std::uint32_t>(v.size());
            v.push_back(normalized(v[a] + v[b]));
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<std::uint32_t, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto &f : faces)
        {
            const auto ab = mid(f[0], f[1]);
            const auto bc = mid(f[1], f[2]);
            const auto ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    LaunchSet out;
    out.directions = std::move(v);
    std::map<std::pair<std::uint32_t, std::uint32_t>, bool> seen;
    for (const auto &f : faces)
        for (int i = 0; i < 3; ++i)
        {
            const auto key = std::minmax(f[i], f[(i + 1) % 3]);
            if (seen.emplace(key, true).second)
                out.neighbours.push_back({key.first, key.second});
        }
    for (const auto &e : out.neighbours)
    {
        const double c = std::clamp(dot(out.directions[e[0]], out.directions[e[1]]), -1.0, 1.0);
        out.theta_sep = std::max(out.theta_sep, std::acos(c));
    }
    return out;
}

// ------------------------------------------------------------------------------------------------
// Surface planes and specular refinement
// ------------------------------------------------------------------------------------------------

struct SurfacePlane
{
    Vec3 point;
    Vec3 normal;
};

inline SurfacePlane surface_plane(const Scene &scene, SurfaceId s)
{
    if (s.is_floor())
        return {{0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}};
    const Aabb &box = scene.boxes()[s.box()];
    const int face = s.face();
    const int axis = face / 2;
    Vec3 p = box.min;
    p[axis] = (face % 2 == 0) ? box.min[axis] : box.max[axis];
    return {p, face_normal(face)};
}

// Point on the plane of `s` that also lies within the surface rectangle.
inline bool surface_contains(const Scene &scene, SurfaceId s, const Vec3 &p)
{
    constexpr double tol = 1e-9;
    if (s.is_floor())
        return scene.floor() && scene.floor()->covers(p);
    const Aabb &box = scene.boxes()[s.box()];
    const int axis = s.face() / 2;
    for (int k = 0; k < 3; ++k)
    {
        if (k == axis)
            continue;
        if (p[k] < box.min[k] - tol || p[k] > box.max[k] + tol)
            return false;
    }
    return true;
}

inline std::vector<SurfaceId> all_surfaces(const Scene &scene)
{
    std::vector<SurfaceId> out;
    if (scene.floor())
        out.push_back(SurfaceId::floor());
    for (std::size_t b = 0; b < scene.boxes().size(); ++b)
        for (int f = 0; f < 6; ++f)
            out.push_back(SurfaceId::box_face(b, f));
    return out;
}

namespace detail
{

// Images of `source` mirrored successively through the planes of `surfaces`; empty when a mirror
// would sit behind (or on) the next reflecting plane.
inline bool build_images(const Scene &scene, const Vec3 &source, std::span<const SurfaceId> surfaces,
                         std::vector<Vec3> &images)
{
    images.clear();
    images.push_back(source);
    for (const SurfaceId s : surfaces)
    {
        const SurfacePlane pl = surface_plane(scene, s);
        const Vec3 &prev = images.back();
        if (dot(prev - pl.point, pl.normal) <= 1e-12)
            return false;
        images.push_back(mirror_point(prev, pl.point, pl.normal));
    }
    return true;
}

// Reflection points of the specular chain ending at `end`, in travel order.
inline bool backtrace(const Scene &scene, std::span<const SurfaceId> surfaces, std::span<const Vec3> images,
                      const Vec3 &end, std::vector<Vec3> &points)
{
    const std::size_t n = surfaces.size();
    points.assign(n, Vec3{});
    Vec3 target = end;
    for (std::size_t k = n; k-- > 0;)
    {
        const SurfacePlane pl = surface_plane(scene, surfaces[k]);
        const Vec3 &img = images[k + 1];
        const double dt = dot(target - pl.point, pl.normal);
        const double di = dot(img - pl.point, pl.normal);
        if (!(dt > 0.0) || !(di < 0.0))
            return false;
        const double s = dt / (dt - di);
        Vec3 p = target + (img - target) * s;
        const int axis = surfaces[k].is_floor() ? 2 : surfaces[k].face() / 2;
        p[axis] = pl.point[axis];
        if (!surface_contains(scene, surfaces[k], p))
            return false;
        points[k] = p;
        target = p;
    }
    return true;
}

inline bool chain_unoccluded(const Scene &scene, std::span<const Vec3> chain)
{
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    {
        if (norm(chain[i + 1] - chain[i]) <= 1e-9)
            return false;
        if (segment_occluded(scene, chain[i], chain[i + 1]))
            return false;
    }
    return true;
}

inline Interaction make_reflection(const Scene &scene, SurfaceId s, const Vec3 &p)
{
    Interaction it;
    it.kind = InteractionKind::Reflection;
    it.point = p;
    it.surface = s;
    it.normal = surface_plane(scene, s).normal;
    it.material = scene.surface_material(s);
    return it;
}

// Fills lengths, directions and signature from the vertex chain tx, interactions..., rx.
inline PropPath assemble_path(std::vector<Interaction> interactions, std::span<const Vec3> chain)
{
    PropPath path;
    path.interactions = std::move(interactions);
    path.segment_lengths.reserve(chain.size() - 1);
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    {
        const Vec3 d = chain[i + 1] - chain[i];
        const double len = norm(d);
        path.segment_lengths.push_back(len);
        path.total_length += len;
        const Vec3 u = d / len;
        if (i == 0)
            path.departure = u;
        if (i + 1 == chain.size() - 1)
            path.arrival = u;
        if (i > 0)
            path.interactions[i - 1].outgoing = u;
        if (i < path.interactions.size())
            path.interactions[i].incoming = u;
    }
    for (const auto &it : path.interactions)
        path.signature.push_back(
            {it.kind, it.kind == InteractionKind::Reflection ? it.surface.code() : it.edge_id});
    return path;
}

} // namespace detail

/// Exact specular path tx -> surfaces... -> rx, or nothing if it is not realizable and unoccluded.
inline std::optional<PropPath> refine_specular(const Scene &scene, const Vec3 &tx, const Vec3 &rx,
                                               std::span<const SurfaceId> surfaces)
{
    std::vector<Vec3> images;
    if (!detail::build_images(scene, tx, surfaces, images))
        return std::nullopt;
    std::vector<Vec3> points;
    if (!detail::backtrace(scene, surfaces, images, rx, points))
        return std::nullopt;
    std::vector<Vec3> chain;
    chain.reserve(points.size() + 2);
    chain.push_back(tx);
    chain.insert(chain.end(), points.begin(), points.end());
    chain.push_back(rx);
    if (!detail::chain_unoccluded(scene, chain))
        return std::nullopt;
    std::vector<Interaction> interactions;
    interactions.reserve(points.size());
    for (std::size_t k = 0; k < points.size(); ++k)
        interactions.push_back(detail::make_reflection(scene, surfaces[k], points[k]));
    return detail::assemble_path(std::move(interactions), chain);
}

/// All specular paths up to max_order reflections by exhaustive mirror enumeration.
inline std::vector<PropPath> image_method_paths(const Scene &scene, const Vec3 &tx, const Vec3 &rx, int max_order,
                                                std::uint64_t budget = 5'000'000)
{
    if (max_order < 0)
        throw std::invalid_argument("image_method_paths: max_order must be non-negative");
    const std::vector<SurfaceId> surfaces = all_surfaces(scene);
    std::vector<PropPath> out;
    std::vector<SurfaceId> seq;
    std::vector<Vec3> images{tx};
    std::uint64_t visited = 0;

    auto visit = [&](auto &&self) -> void {
        if (++visited > budget)
            throw ResourceError("image_method_paths: enumeration budget of " + std::to_string(budget) +
                                " mirror sequences exceeded");
        std::vector<Vec3> points;
        if (detail::backtrace(scene, seq, images, rx, points))
        {
            std::vector<Vec3> chain{tx};
            chain.insert(chain.end(), points.begin(), points.end());
            chain.push_back(rx);
            if (detail::chain_unoccluded(scene, chain))
            {
                std::vector<Interaction> interactions;
                for (std::size_t k = 0; k < points.size(); ++k)
                    interactions.push_back(detail::make_reflection(scene, seq[k], points[k]));
                out.push_back(detail::assemble_path(std::move(interactions), chain));
            }
        }
        if (static_cast<int>(seq.size()) == max_order)
            return;
        for (const SurfaceId s : surfaces)
        {
            if (!seq.empty() && seq.back() == s)
                continue;
            const SurfacePlane pl = surface_plane(scene, s);
            if (dot(images.back() - pl.point, pl.normal) <= 1e-12)
                continue;
            seq.push_back(s);
            images.push_back(mirror_point(images[images.size() - 1], pl.point, pl.normal));
            self(self);
            images.pop_back();
            seq.pop_back();
        }
    };
    visit(visit);
    std::sort(out.begin(), out.end(), signature_less);
    return out;
}

// ------------------------------------------------------------------------------------------------
// Shooting and bouncing rays
// ------------------------------------------------------------------------------------------------

// Regular receiver lattice in a horizontal plane.
struct GridLayout
{
    double x0 = 0.0, y0 = 0.0, spacing = 1.0;
    std::size_t nx = 0, ny = 0;
    double z = 0.0;

    Vec3 point(std::size_t i, std::size_t j) const
    {
        return {x0 + static_cast<double>(i) * spacing, y0 + static_cast<double>(j) * spacing, z};
    }
};

class SbrTree
{
  public:
    struct Segment
    {
        Vec3 origin;
        Vec3 direction;
        double length = 0.0;       // m; rays escaping the scene are cut at kEscapeLength
        double start_length = 0.0; // unfolded length from the transmitter to `origin`
        std::uint32_t node = 0;    // interned reflection sequence
    };

    static constexpr double kEscapeLength = 1e4;

    SbrTree(const Scene &scene, const Vec3 &tx, const LaunchConfig &cfg) : scene_(&scene), tx_(tx), cfg_(cfg)
    {
        if (cfg.max_reflections < 0)
            throw std::invalid_argument("SbrTree: max_reflections must be non-negative");
        const LaunchSet launch = launch_directions(cfg.tessellation_order);
        theta_sep_ = launch.theta_sep;
        capture_factor_ = theta_sep_ / std::sqrt(3.0);
        nodes_.push_back({0, SurfaceId::floor(), 0});
        for (const Vec3 &dir0 : launch.directions)
        {
            Ray ray{tx, dir0};
            double unfolded = 0.0;
            std::uint32_t node = 0;
            for (int depth = 0; depth <= cfg.max_reflections; ++depth)
            {
                const auto hit = intersect_scene(ray, scene);
                const double len = hit ? hit->t : kEscapeLength;
                segments_.push_back({ray.origin, ray.direction, len, unfolded, node});
                if (!hit || depth == cfg.max_reflections)
                    break;
                if (dot(ray.direction, hit->normal) >= 0.0)
                    break;
                unfolded += len;
                node = intern(node, hit->surface, static_cast<std::uint16_t>(depth + 1));
                ray = Ray{hit->point, normalized(reflect_direction(ray.direction, hit->normal))};
            }
        }
    }

    double theta_sep() const { return theta_sep_; }
    const std::vector<Segment> &segments() const { return segments_; }
    std::size_t node_count() const { return nodes_.size(); }

    /// Reception-sphere test: rx within theta_sep * L / sqrt(3) of the segment. The segment is extended at both
    /// ends by the local sphere radius so that receivers close to a reflecting surface are not missed.
    bool captures(const Segment &s, const Vec3 &rx) const
    {
        const Vec3 w = rx - s.origin;
        const double t = dot(w, s.direction);
        const double lo = -capture_factor_ * s.start_length;
        const double hi = s.length + capture_factor_ * (s.start_length + s.length);
        if (t < lo || t > hi)
            return false;
        const Vec3 off = w - s.direction * t;
        const double r = capture_factor_ * (s.start_length + t);
        return dot(off, off) < r * r;
    }

    /// Sorted unique sequence nodes captured at rx (the direct path is always a candidate).
    std::vector<std::uint32_t> captured(const Vec3 &rx) const
    {
        std::vector<std::uint32_t> out{0};
        for (const Segment &s : segments_)
            if (captures(s, rx))
                out.push_back(s.node);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// captured() for every lattice point, rasterizing each segment's reception tube onto the plane.
    std::vector<std::vector<std::uint32_t>> captured_grid(const GridLayout &g) const
    {
        std::vector<std::vector<std::uint32_t>> cells(g.nx * g.ny, std::vector<std::uint32_t>{0});
        if (g.nx == 0 || g.ny == 0)
            return cells;
        const double c = capture_factor_;
        const double pad = 1e-6;
        for (const Segment &s : segments_)
        {
            // parameter range where the tube can reach the plane z = g.z
            double t0 = -c * s.start_length, t1 = s.length + c * (s.start_length + s.length);
            const double a = s.origin.z - g.z;
            const double b = s.direction.z;
            auto clip = [&](double coef, double rhs) {
                if (coef > 0.0)
                    t1 = std::min(t1, rhs / coef);
                else if (coef < 0.0)
                    t0 = std::max(t0, rhs / coef);
                else if (rhs < 0.0)
                    t1 = -1.0;
            };
            clip(b - c, c * s.start_length - a);
            clip(-b - c, c * s.start_length + a);
            t0 = std::max(-c * s.start_length, t0 - pad);
            t1 = std::min(s.length + c * (s.start_length + s.length), t1 + pad);
            if (t1 < t0)
                continue;
            const double r_max = c * (s.start_length + t1) + pad;
            const Vec3 p0 = s.origin + s.direction * t0;
            const Vec3 p1 = s.origin + s.direction * t1;
            const double ylo = std::min(p0.y, p1.y) - r_max;
            const double yhi = std::max(p0.y, p1.y) + r_max;
            const auto jr = index_range(ylo, yhi, g.y0, g.spacing, g.ny);
            for (std::size_t j = jr.first; j < jr.second; ++j)
            {
                const double y = g.y0 + static_cast<double>(j) * g.spacing;
                // sub-range of the segment within r_max of this row
                double u0 = t0, u1 = t1;
                if (s.direction.y != 0.0)
                {
                    double ta = (y - r_max - s.origin.y) / s.direction.y;
                    double tb = (y + r_max - s.origin.y) / s.direction.y;
                    if (ta > tb)
                        std::swap(ta, tb);
                    u0 = std::max(u0, ta);
                    u1 = std::min(u1, tb);
                    if (u1 < u0)
                        continue;
                }
                const double xa = s.origin.x + s.direction.x * u0;
                const double xb = s.origin.x + s.direction.x * u1;
                const auto ir = index_range(std::min(xa, xb) - r_max, std::max(xa, xb) + r_max, g.x0, g.spacing, g.nx);
                for (std::size_t i = ir.first; i < ir.second; ++i)
                    if (captures(s, g.point(i, j)))
                        cells[j * g.nx + i].push_back(s.node);
            }
        }
        for (auto &cell : cells)
        {
            std::sort(cell.begin(), cell.end());
            cell.erase(std::unique(cell.begin(), cell.end()), cell.end());
        }
        return cells;
    }

    std::vector<SurfaceId> surfaces(std::uint32_t node) const
    {
        std::vector<SurfaceId> out(nodes_[node].depth);
        for (std::uint32_t n = node; n != 0; n = nodes_[n].parent)
            out[nodes_[n].depth - 1] = nodes_[n].surface;
        return out;
    }

    /// Refined, deduplicated, signature-sorted specular paths for the given candidate nodes.
    std::vector<PropPath> refine(std::span<const std::uint32_t> nodes, const Vec3 &rx) const
    {
        std::vector<PropPath> out;
        for (const std::uint32_t node : nodes)
        {
            const auto seq = surfaces(node);
            if (auto p = refine_specular(*scene_, tx_, rx, seq))
                out.push_back(std::move(*p));
        }
        std::sort(out.begin(), out.end(), signature_less);
        out.erase(std::unique(out.begin(), out.end(),
                              [](const PropPath &a, const PropPath &b) { return a.signature == b.signature; }),
                  out.end());
        return out;
    }

    std::vector<PropPath> paths_to(const Vec3 &rx) const { return refine(captured(rx), rx); }

  private:
    struct Node
    {
        std::uint32_t parent;
        SurfaceId surface;
        std::uint16_t depth;
    };

    static std::pair<std::size_t, std::size_t> index_range(double lo, double hi, double origin, double spacing,
                                                           std::size_t n)
    {
        const double a = std::ceil((lo - origin) / spacing);
        const double b = std::floor((hi - origin) / spacing);
        if (b < 0.0 || a > static_cast<double>(n) - 1.0 || b < a)
            return {0, 0};
        const auto first = static_cast<std::size_t>(std::max(0.0, a));
        const auto last = static_cast<std::size_t>(std::min(static_cast<double>(n) - 1.0, b));
        return {first, last + 1};
    }

    std::uint32_t intern(std::uint32_t parent, SurfaceId s, std::uint16_t depth)
    {
        const auto key = (static_cast<std::uint64_t>(parent) << 32) | static_cast<std::uint32_t>(s.code());
        auto it = index_.find(key);
        if (it != index_.end())
            return it->second;
        const auto id = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back({parent, s, depth});
        index_.emplace(key, id);
        return id;
    }

    const Scene *scene_;
    Vec3 tx_;
    LaunchConfig cfg_;
    double theta_sep_ = 0.0;
    double capture_factor_ = 0.0;
    std::vector<Segment> segments_;
    std::vector<Node> nodes_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_;
};

/// Shooting-and-bouncing-ray path discovery with image-method refinement.
inline std::vector<PropPath> trace_sbr(const Scene &scene, const Vec3 &tx, const Vec3 &rx, const LaunchConfig &cfg)
{
    if (scene.inside_any_box(tx) || scene.inside_any_box(rx))
        throw std::invalid_argument("trace_sbr: transmitter or receiver inside geometry");
    return SbrTree(scene, tx, cfg).paths_to(rx);
}

// ------------------------------------------------------------------------------------------------
// Edge diffraction
// ------------------------------------------------------------------------------------------------

class DiffractionTracer
{
  public:
    DiffractionTracer(const Scene &scene, const Vec3 &tx, const LaunchConfig &cfg)
        : scene_(&scene), tx_(tx), cfg_(cfg), edges_(enumerate_edges(scene))
    {
        if (cfg.max_reflections_with_diffraction < 0)
            throw std::invalid_argument("DiffractionTracer: max_reflections_with_diffraction must be non-negative");
        if (cfg.leg_reflectors == LegReflectors::Floor)
        {
            if (scene.floor())
                reflectors_.push_back(SurfaceId::floor());
        }
        else
        {
            reflectors_ = all_surfaces(scene);
        }
        const int m = cfg.max_reflections_with_diffraction;
        // sequences without immediate repeats: 1 + r + r(r-1) + ...
        double per_leg = 1.0, level = 1.0;
        const double r = static_cast<double>(reflectors_.size());
        for (int k = 1; k <= m; ++k)
        {
            level *= (k == 1) ? r : (r - 1.0);
            per_leg += level;
        }
        const double combos = static_cast<double>(edges_.size()) * per_leg * per_leg;
        if (combos > static_cast<double>(cfg.enumeration_budget))
            throw ResourceError("find_diffraction_paths: " + std::to_string(static_cast<long long>(combos)) +
                                " edge/leg combinations exceed the enumeration budget of " +
                                std::to_string(cfg.enumeration_budget));
        enumerate_legs(tx, legs_tx_);
        // per-edge source azimuth test, independent of the receiver
        lit_.assign(edges_.size() * legs_tx_.size(), 0);
        for (std::size_t e = 0; e < edges_.size(); ++e)
            for (std::size_t l = 0; l < legs_tx_.size(); ++l)
                lit_[e * legs_tx_.size() + l] = exterior(edges_[e], legs_tx_[l].images.back()) ? 1 : 0;
    }

    const std::vector<EdgeSpec> &edges() const { return edges_; }

    std::vector<PropPath> paths_to(const Vec3 &rx) const
    {
        std::vector<PropPath> out;
        std::vector<Leg> legs_rx;
        enumerate_legs(rx, legs_rx);
        std::vector<Vec3> pts_tx, pts_rx, chain;
        for (std::size_t e = 0; e < edges_.size(); ++e)
        {
            const EdgeSpec &edge = edges_[e];
            const Vec3 ed = edge.direction();
            const double len = edge.length();
            for (const Leg &lr : legs_rx)
            {
                const Vec3 &obs = lr.images.back();
                if (!exterior(edge, obs))
                    continue;
                for (std::size_t l = 0; l < legs_tx_.size(); ++l)
                {
                    if (!lit_[e * legs_tx_.size() + l])
                        continue;
                    const Leg &lt = legs_tx_[l];
                    const Vec3 &src = lt.images.back();
                    const auto q = keller_point(edge.a, ed, len, src, obs);
                    if (!q)
                        continue;
                    if (!detail::backtrace(*scene_, lt.surfaces, lt.images, *q, pts_tx))
                        continue;
                    if (!detail::backtrace(*scene_, lr.surfaces, lr.images, *q, pts_rx))
                        continue;
                    chain.clear();
                    chain.push_back(tx_);
                    chain.insert(chain.end(), pts_tx.begin(), pts_tx.end());
                    chain.push_back(*q);
                    chain.insert(chain.end(), pts_rx.rbegin(), pts_rx.rend());
                    chain.push_back(rx);
                    if (!detail::chain_unoccluded(*scene_, chain))
                        continue;
                    std::vector<Interaction> interactions;
                    for (std::size_t k = 0; k < pts_tx.size(); ++k)
                        interactions.push_back(detail::make_reflection(*scene_, lt.surfaces[k], pts_tx[k]));
                    Interaction d;
                    d.kind = InteractionKind::Diffraction;
                    d.point = *q;
                    d.edge_id = static_cast<std::int32_t>(e);
                    d.edge = edge;
                    interactions.push_back(d);
                    for (std::size_t k = pts_rx.size(); k-- > 0;)
                        interactions.push_back(detail::make_reflection(*scene_, lr.surfaces[k], pts_rx[k]));
                    out.push_back(detail::assemble_path(std::move(interactions), chain));
                }
            }
        }
        std::sort(out.begin(), out.end(), signature_less);
        return out;
    }

    /// Point on the edge segment minimizing |src - Q| + |Q - obs| (Keller cone condition).
    static std::optional<Vec3> keller_point(const Vec3 &a, const Vec3 &e, double len, const Vec3 &src,
                                            const Vec3 &obs)
    {
        const double zs = dot(src - a, e);
        const double zo = dot(obs - a, e);
        const double rs = norm(src - a - e * zs);
        const double ro = norm(obs - a - e * zo);
        if (rs + ro <= 1e-12)
            return std::nullopt;
        const double z = (zs * ro + zo * rs) / (rs + ro);
        if (z <= 1e-9 || z >= len - 1e-9)
            return std::nullopt;
        return a + e * z;
    }

  private:
    struct Leg
    {
        std::vector<SurfaceId> surfaces; // in order of mirroring, starting at the leg endpoint
        std::vector<Vec3> images;
    };

    // point strictly outside the wedge interior and off the edge line
    static bool exterior(const EdgeSpec &edge, const Vec3 &p)
    {
        const Vec3 e = edge.direction();
        const Vec3 v = p - edge.a;
        const Vec3 perp = v - e * dot(v, e);
        if (norm(perp) <= 1e-9)
            return false;
        const double phi = wedge_azimuth(edge, perp);
        return phi > 1e-12 && phi < edge.n_wedge * std::numbers::pi - 1e-12;
    }

    void enumerate_legs(const Vec3 &start, std::vector<Leg> &legs) const
    {
        legs.clear();
        Leg cur;
        cur.images.push_back(start);
        auto visit = [&](auto &&self) -> void {
            legs.push_back(cur);
            if (static_cast<int>(cur.surfaces.size()) == cfg_.max_reflections_with_diffraction)
                return;
            for (const SurfaceId s : reflectors_)
            {
                if (!cur.surfaces.empty() && cur.surfaces.back() == s)
                    continue;
                const SurfacePlane pl = surface_plane(*scene_, s);
                if (dot(cur.images.back() - pl.point, pl.normal) <= 1e-12)
                    continue;
                cur.surfaces.push_back(s);
                cur.images.push_back(mirror_point(cur.images.back(), pl.point, pl.normal));
                self(self);
                cur.images.pop_back();
                cur.surfaces.pop_back();
            }
        };
        visit(visit);
    }

    const Scene *scene_;
    Vec3 tx_;
    LaunchConfig cfg_;
    std::vector<EdgeSpec> edges_;
    std::vector<SurfaceId> reflectors_;
    std::vector<Leg> legs_tx_;
    std::vector<std::uint8_t> lit_;
};

/// Single-diffraction paths (with up to max_reflections_with_diffraction reflections per leg).
inline std::vector<PropPath> find_diffraction_paths(const Scene &scene, const Vec3 &tx, const Vec3 &rx,
                                                    const LaunchConfig &cfg)
{
    if (!cfg.enable_diffraction)
        return {};
    return DiffractionTracer(scene, tx, cfg).paths_to(rx);
}

/// Merges two path lists into one signature-sorted list; for equal signatures the entry from `a` is kept.
inline std::vector<PropPath> merge_paths(std::vector<PropPath> a, std::vector<PropPath> b)
{
    a.insert(a.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
    std::stable_sort(a.begin(), a.end(), signature_less);
    a.erase(std::unique(a.begin(), a.end(),
                        [](const PropPath &x, const PropPath &y) { return x.signature == y.signature; }),
            a.end());
    return a;
}

/// SBR paths plus every specular path up to cfg.exhaustive_order reflections.
inline std::vector<PropPath> find_specular_paths(const Scene &scene, const Vec3 &tx, const Vec3 &rx,
                                                 const LaunchConfig &cfg)
{
    auto sbr = trace_sbr(scene, tx, rx, cfg);
    const int order = std::min(cfg.exhaustive_order, cfg.max_reflections);
    if (order <= 0)
        return sbr;
    return merge_paths(std::move(sbr), image_method_paths(scene, tx, rx, order, cfg.enumeration_budget));
}

} // namespace uwbrt

#endif
