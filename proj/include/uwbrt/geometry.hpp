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

#ifndef UWBRT_GEOMETRY_HPP
#define UWBRT_GEOMETRY_HPP

#include "materials.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace uwbrt
{

// Ray parameter guard against self-intersection (m)
inline constexpr double kSelfHitEpsilon = 1e-6;

// Hits closer than this to a face boundary are resolved by the largest |d.n| rule (m)
inline constexpr double kEdgeTieDistance = 1e-6;

template <typename T>
struct BasicVec3
{
    T x{}, y{}, z{};

    constexpr BasicVec3() = default;
    constexpr BasicVec3(T x_, T y_, T z_) : x(x_), y(y_), z(z_) {}

    constexpr T operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr T &operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr BasicVec3 operator+(const BasicVec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr BasicVec3 operator-(const BasicVec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr BasicVec3 operator-() const { return {-x, -y, -z}; }
    constexpr BasicVec3 operator*(T s) const { return {x * s, y * s, z * s}; }
    constexpr BasicVec3 operator/(T s) const { return {x / s, y / s, z / s}; }
    constexpr BasicVec3 &operator+=(const BasicVec3 &o)
    {
        x += o.x, y += o.y, z += o.z;
        return *this;
    }
    constexpr BasicVec3 &operator-=(const BasicVec3 &o)
    {
        x -= o.x, y -= o.y, z -= o.z;
        return *this;
    }
    constexpr BasicVec3 &operator*=(T s)
    {
        x *= s, y *= s, z *= s;
        return *this;
    }
    friend constexpr BasicVec3 operator*(T s, const BasicVec3 &v) { return v * s; }
    constexpr bool operator==(const BasicVec3 &) const = default;
};

using Vec3 = BasicVec3<double>;
using CVec3 = BasicVec3<std::complex<double>>;

constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

// Bilinear (no conjugation) product of a complex field with a real direction.
inline std::complex<double> dot(const CVec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(const Vec3 &a, const Vec3 &b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3 &v) { return std::sqrt(dot(v, v)); }
inline double norm(const CVec3 &v) { return std::sqrt(std::norm(v.x) + std::norm(v.y) + std::norm(v.z)); }

inline Vec3 normalized(const Vec3 &v)
{
    const double n = norm(v);
    if (n == 0.0)
        throw std::invalid_argument("normalized: zero-length vector");
    return v / n;
}

inline CVec3 to_complex(const Vec3 &v) { return {v.x, v.y, v.z}; }

inline CVec3 operator*(std::complex<double> s, const Vec3 &v) { return {s * v.x, s * v.y, s * v.z}; }

inline Vec3 unit_axis(int axis)
{
    Vec3 e;
    e[static_cast<std::size_t>(axis)] = 1.0;
    return e;
}

struct Ray
{
    Vec3 origin;
    Vec3 direction; // unit

    Vec3 at(double t) const { return origin + direction * t; }
};

// Axis-aligned box. Faces are numbered 2*axis + side, side 0 = min plane, side 1 = max plane.
struct Aabb
{
    Vec3 min;
    Vec3 max;
    std::size_t material_id = 0;

    bool contains(const Vec3 &p) const
    {
        return p.x > min.x && p.x < max.x && p.y > min.y && p.y < max.y && p.z > min.z && p.z < max.z;
    }
    bool overlaps(const Aabb &o) const
    {
        return min.x < o.max.x && o.min.x < max.x && min.y < o.max.y && o.min.y < max.y && min.z < o.max.z &&
               o.min.z < max.z;
    }
    bool operator==(const Aabb &) const = default;
};

inline Vec3 face_normal(int face)
{
    Vec3 n = unit_axis(face / 2);
    return (face % 2 == 0) ? -n : n;
}

// Identifies a reflecting surface: a box face or the floor.
class SurfaceId
{
  public:
    constexpr SurfaceId() = default;
    static constexpr SurfaceId floor() { return SurfaceId(-1); }
    static constexpr SurfaceId box_face(std::size_t box, int face)
    {
        return SurfaceId(static_cast<std::int32_t>(box) * 6 + face);
    }
    static constexpr SurfaceId from_code(std::int32_t code) { return SurfaceId(code); }

    constexpr bool is_floor() const { return value_ < 0; }
    constexpr std::size_t box() const { return static_cast<std::size_t>(value_ / 6); }
    constexpr int face() const { return value_ % 6; }
    constexpr std::int32_t code() const { return value_; }

    constexpr auto operator<=>(const SurfaceId &) const = default;

  private:
    constexpr explicit SurfaceId(std::int32_t v) : value_(v) {}
    std::int32_t value_ = -1;
};

struct HitRecord
{
    double t = 0.0;
    Vec3 point;
    Vec3 normal; // unit, outward
    SurfaceId surface;
};

// Floor plane z = 0 clipped to [0, extent_x] x [0, extent_y].
struct FloorPlane
{
    double extent_x = 0.0;
    double extent_y = 0.0;
    std::size_t material_id = 0;

    bool covers(const Vec3 &p) const { return p.x >= 0.0 && p.x <= extent_x && p.y >= 0.0 && p.y <= extent_y; }
};

struct EdgeSpec
{
    Vec3 a, b;       // endpoints, b - a runs along cross(n1, n2)
    Vec3 n1, n2;     // outward normals of the o-face and the n-face
    double n_wedge = 1.5;
    std::size_t box = 0;

    Vec3 direction() const { return normalized(b - a); }
    double length() const { return norm(b - a); }
};

namespace detail
{

// Picks the entry face of a box hit; near edges the face with the largest |d.n| wins.
inline int resolve_entry_face(const Aabb &box, const Vec3 &p, const Vec3 &d, int slab_face)
{
    int best = slab_face;
    double best_cos = std::abs(dot(d, face_normal(slab_face)));
    for (int face = 0; face < 6; ++face)
    {
        if (face == slab_face)
            continue;
        const int axis = face / 2;
        const double plane = (face % 2 == 0) ? box.min[axis] : box.max[axis];
        if (std::abs(p[axis] - plane) > kEdgeTieDistance)
            continue;
        const double c = dot(d, face_normal(face));
        if (c >= 0.0)
            continue;
        if (-c > best_cos || (-c == best_cos && face < best))
        {
            best = face;
            best_cos = -c;
        }
    }
    return best;
}

// Slab test returning the entry parameter and the entry face, or nothing.
inline bool slab_entry(const Ray &ray, const Aabb &box, double &t_enter, double &t_exit, int &face)
{
    t_enter = -std::numeric_limits<double>::infinity();
    t_exit = std::numeric_limits<double>::infinity();
    face = -1;
    for (int axis = 0; axis < 3; ++axis)
    {
        const double o = ray.origin[axis];
        const double d = ray.direction[axis];
        const double lo = box.min[axis];
        const double hi = box.max[axis];
        if (d == 0.0)
        {
            if (o < lo || o > hi)
                return false;
            continue;
        }
        const double inv = 1.0 / d;
        double t0 = (lo - o) * inv;
        double t1 = (hi - o) * inv;
        int f0 = 2 * axis;
        if (t0 > t1)
        {
            std::swap(t0, t1);
            f0 = 2 * axis + 1;
        }
        if (t0 > t_enter)
        {
            t_enter = t0;
            face = f0;
        }
        t_exit = std::min(t_exit, t1);
        if (t_enter > t_exit)
            return false;
    }
    return face >= 0;
}

} // namespace detail

/// Nearest front-face hit of a ray with a box (t > kSelfHitEpsilon), or nothing.
inline std::optional<HitRecord> intersect_ray_aabb(const Ray &ray, const Aabb &box, std::size_t box_index = 0)
{
    double t_enter = 0.0, t_exit = 0.0;
    int face = -1;
    if (!detail::slab_entry(ray, box, t_enter, t_exit, face))
        return std::nullopt;
    if (t_enter <= kSelfHitEpsilon)
        return std::nullopt;
    HitRecord hit;
    hit.t = t_enter;
    hit.point = ray.at(t_enter);
    face = detail::resolve_entry_face(box, hit.point, ray.direction, face);
    hit.normal = face_normal(face);
    hit.surface = SurfaceId::box_face(box_index, face);
    // snap the coordinate of the hit face exactly onto its plane
    const int axis = face / 2;
    hit.point[axis] = (face % 2 == 0) ? box.min[axis] : box.max[axis];
    return hit;
}

class Scene
{
  public:
    Scene() = default;
    Scene(std::vector<Aabb> boxes, std::optional<FloorPlane> floor, std::vector<Material> materials = {Material::pec()})
        : boxes_(std::move(boxes)), floor_(floor), materials_(std::move(materials))
    {
        if (materials_.empty())
            throw std::invalid_argument("Scene: material table is empty");
        if (floor_ && floor_->material_id >= materials_.size())
            throw std::invalid_argument("Scene: floor material id out of range");
        for (std::size_t i = 0; i < boxes_.size(); ++i)
        {
            const Aabb &b = boxes_[i];
            if (b.material_id >= materials_.size())
                throw std::invalid_argument("Scene: box material id out of range");
            if (!(b.min.x < b.max.x && b.min.y < b.max.y && b.min.z < b.max.z))
                throw std::invalid_argument("Scene: box min must be below max componentwise");
            for (std::size_t j = 0; j < i; ++j)
                if (b.overlaps(boxes_[j]))
                    throw std::invalid_argument("Scene: boxes overlap");
        }
    }

    const std::vector<Aabb> &boxes() const { return boxes_; }
    const std::optional<FloorPlane> &floor() const { return floor_; }
    const std::vector<Material> &materials() const { return materials_; }

    const Material &surface_material(SurfaceId s) const
    {
        return materials_[s.is_floor() ? floor_->material_id : boxes_[s.box()].material_id];
    }

    bool inside_any_box(const Vec3 &p) const
    {
        return std::any_of(boxes_.begin(), boxes_.end(), [&](const Aabb &b) { return b.contains(p); });
    }

  private:
    std::vector<Aabb> boxes_;
    std::optional<FloorPlane> floor_;
    std::vector<Material> materials_{Material::pec()};
};

inline std::optional<HitRecord> intersect_floor(const Ray &ray, const FloorPlane &floor)
{
    if (ray.direction.z >= 0.0 || ray.origin.z <= 0.0)
        return std::nullopt;
    const double t = -ray.origin.z / ray.direction.z;
    if (t <= kSelfHitEpsilon)
        return std::nullopt;
    Vec3 p = ray.at(t);
    p.z = 0.0;
    if (!floor.covers(p))
        return std::nullopt;
    return HitRecord{t, p, Vec3{0.0, 0.0, 1.0}, SurfaceId::floor()};
}

/// Globally nearest hit among all boxes and the floor.
inline std::optional<HitRecord> intersect_scene(const Ray &ray, const Scene &scene)
{
    std::optional<HitRecord> best;
    const auto &boxes = scene.boxes();
    for (std::size_t i = 0; i < boxes.size(); ++i)
    {
        auto hit = intersect_ray_aabb(ray, boxes[i], i);
        if (hit && (!best || hit->t < best->t))
            best = hit;
    }
    if (scene.floor())
    {
        auto hit = intersect_floor(ray, *scene.floor());
        if (hit && (!best || hit->t < best->t))
            best = hit;
    }
    return best;
}

/// True when the open segment p -> q is blocked by any box or the floor.
inline bool segment_occluded(const Scene &scene, const Vec3 &p, const Vec3 &q)
{
    const Vec3 d = q - p;
    const double len = norm(d);
    if (len <= 2.0 * kSelfHitEpsilon)
        return false;
    const Ray ray{p, d / len};
    const double t_max = len - kSelfHitEpsilon;
    for (const Aabb &box : scene.boxes())
    {
        double t_enter = 0.0, t_exit = 0.0;
        int face = -1;
        if (!detail::slab_entry(ray, box, t_enter, t_exit, face))
            continue;
        // a segment that only touches the box at an endpoint is not blocked
        if (t_exit > kSelfHitEpsilon && t_enter < t_max && t_exit - t_enter > 1e-12)
            return true;
    }
    if (scene.floor() && p.z * q.z < 0.0)
        return true;
    return false;
}

/// Specular reflection d - 2(d.n)n.
inline Vec3 reflect_direction(const Vec3 &d, const Vec3 &n)
{
    if (dot(d, n) >= 0.0)
        throw std::domain_error("reflect_direction: direction must approach the surface (d.n < 0)");
    return d - n * (2.0 * dot(d, n));
}

inline Vec3 mirror_point(const Vec3 &p, const Vec3 &plane_point, const Vec3 &n)
{
    return p - n * (2.0 * dot(p - plane_point, n));
}

/// All box edges (12 per box, shorter than 1 cm omitted) with their wedge data.
inline std::vector<EdgeSpec> enumerate_edges(const Scene &scene)
{
    std::vector<EdgeSpec> edges;
    const auto &boxes = scene.boxes();
    for (std::size_t bi = 0; bi < boxes.size(); ++bi)
    {
        const Aabb &box = boxes[bi];
        for (int k = 0; k < 3; ++k)
        {
            const int i = (k + 1) % 3;
            const int j = (k + 2) % 3;
            for (int si = 0; si < 2; ++si)
                for (int sj = 0; sj < 2; ++sj)
                {
                    EdgeSpec e;
                    e.box = bi;
                    e.n1 = face_normal(2 * i + si);
                    e.n2 = face_normal(2 * j + sj);
                    Vec3 a, b;
                    a[i] = b[i] = si ? box.max[i] : box.min[i];
                    a[j] = b[j] = sj ? box.max[j] : box.min[j];
                    a[k] = box.min[k];
                    b[k] = box.max[k];
                    if (dot(cross(e.n1, e.n2), unit_axis(k)) < 0.0)
                        std::swap(a, b);
                    e.a = a;
                    e.b = b;
                    e.n_wedge = 1.5;
                    if (e.length() < 0.01)
                        continue;
                    edges.push_back(e);
                }
        }
    }
    return edges;
}

} // namespace uwbrt

#endif
