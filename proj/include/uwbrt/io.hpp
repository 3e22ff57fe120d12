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

#ifndef UWBRT_IO_HPP
#define UWBRT_IO_HPP

#include "link.hpp"
#include "scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uwbrt
{

inline constexpr std::string_view kCsvHeader = "x_m,y_m,z_m,p_dbm,covered";

inline std::string format_dbm(double p)
{
    if (std::isinf(p))
        return p < 0.0 ? "-inf" : "inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", p);
    return buf;
}

inline double parse_dbm(const std::string &s)
{
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
        throw std::invalid_argument("parse_dbm: trailing characters in '" + s + "'");
    return v;
}

/// One row per grid point, y outer and x inner.
inline std::string power_map_csv(const PowerMap &m)
{
    std::string out(kCsvHeader);
    out += '\n';
    char buf[96];
    for (std::size_t j = 0; j < m.ny; ++j)
        for (std::size_t i = 0; i < m.nx; ++i)
        {
            const Vec3 p = m.point(i, j);
            const std::size_t k = m.index(i, j);
            std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.4f,", p.x, p.y, p.z);
            out += buf;
            out += format_dbm(m.values[k]);
            out += m.covered[k] ? ",1\n" : ",0\n";
        }
    return out;
}

struct CsvRow
{
    double x, y, z, p_dbm;
    bool covered;
};

inline std::vector<CsvRow> parse_power_csv(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::invalid_argument("parse_power_csv: missing or unexpected header");
    std::vector<CsvRow> rows;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        std::array<std::string, 5> f;
        std::size_t n = 0, start = 0;
        for (std::size_t pos = 0; pos <= line.size(); ++pos)
            if (pos == line.size() || line[pos] == ',')
            {
                if (n == f.size())
                    throw std::invalid_argument("parse_power_csv: too many fields");
                f[n++] = line.substr(start, pos - start);
                start = pos + 1;
            }
        if (n != f.size() || (f[4] != "0" && f[4] != "1"))
            throw std::invalid_argument("parse_power_csv: malformed row '" + line + "'");
        rows.push_back({std::stod(f[0]), std::stod(f[1]), std::stod(f[2]), parse_dbm(f[3]), f[4] == "1"});
    }
    return rows;
}

// ------------------------------------------------------------------------------------------------
// Heatmap
// ------------------------------------------------------------------------------------------------

struct HeatmapScale
{
    double lo_dbm = -130.0;
    double hi_dbm = -30.0;
};

/// Ramp blue, cyan, green, yellow, red over [lo, hi] in 256 levels; -inf maps to black.
inline std::array<std::uint8_t, 3> heatmap_color(double p_dbm, const HeatmapScale &s = {})
{
    if (std::isnan(p_dbm) || (std::isinf(p_dbm) && p_dbm < 0.0))
        return {0, 0, 0};
    double t = (p_dbm - s.lo_dbm) / (s.hi_dbm - s.lo_dbm);
    t = std::clamp(t, 0.0, 1.0);
    const int level = static_cast<int>(std::lround(t * 255.0));
    static constexpr std::array<std::array<int, 3>, 5> stops = {
        {{0, 0, 255}, {0, 255, 255}, {0, 255, 0}, {255, 255, 0}, {255, 0, 0}}};
    const double u = level / 255.0 * 4.0;
    const int seg = std::min(3, static_cast<int>(u));
    const double w = u - seg;
    std::array<std::uint8_t, 3> c{};
    for (int k = 0; k < 3; ++k)
        c[k] = static_cast<std::uint8_t>(std::lround(stops[seg][k] + w * (stops[seg + 1][k] - stops[seg][k])));
    return c;
}

/// Binary PPM (P6); image row 0 is the largest y.
inline std::string power_map_ppm(const PowerMap &m, const HeatmapScale &s = {})
{
    std::string out = "P6\n" + std::to_string(m.nx) + " " + std::to_string(m.ny) + "\n255\n";
    for (std::size_t r = 0; r < m.ny; ++r)
    {
        const std::size_t j = m.ny - 1 - r;
        for (std::size_t i = 0; i < m.nx; ++i)
        {
            const auto c = heatmap_color(m.values[m.index(i, j)], s);
            out.append(reinterpret_cast<const char *>(c.data()), 3);
        }
    }
    return out;
}

// ------------------------------------------------------------------------------------------------
// Structured records
// ------------------------------------------------------------------------------------------------

inline std::string hex64(std::uint64_t v)
{
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline nlohmann::ordered_json stats_to_json(const CoverageStats &s, double covered_within_20m)
{
    nlohmann::ordered_json j;
    j["reachable_points"] = s.reachable_points;
    j["covered_points"] = s.covered_points;
    j["covered_fraction"] = s.covered_fraction;
    j["reliable_range_m"] = s.reliable_range_m;
    j["blind_spots"] = s.blind_spots;
    j["max_power_dbm"] = std::isfinite(s.max_power_dbm) ? nlohmann::ordered_json(s.max_power_dbm)
                                                         : nlohmann::ordered_json(format_dbm(s.max_power_dbm));
    j["covered_fraction_within_20m"] = covered_within_20m;
    return j;
}

inline std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string &path, std::string_view data)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out)
        throw std::runtime_error("write failed for '" + path + "'");
}

// ------------------------------------------------------------------------------------------------
// Run comparison
// ------------------------------------------------------------------------------------------------

struct ComparisonResult
{
    std::vector<CsvRow> delta; // p_dbm holds A - B in dB
    CoverageStats a, b;
};

/// Difference of two power levels; equal infinities compare as zero.
inline double delta_db(double a, double b)
{
    if (std::isinf(a) && std::isinf(b) && (a < 0.0) == (b < 0.0))
        return 0.0;
    return a - b;
}

namespace detail
{

inline PowerMap map_from_rows(const ScenarioSpec &s, const std::vector<CsvRow> &rows)
{
    PowerMap m;
    m.grid = s.rx.grid;
    m.nx = m.grid.nx();
    m.ny = m.grid.ny();
    if (rows.size() != m.nx * m.ny)
        throw std::invalid_argument("compare: CSV row count does not match the scenario grid");
    const Scene scene = build_scene(s);
    m.values.resize(rows.size());
    m.covered.resize(rows.size());
    m.reachable.resize(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k)
    {
        const Vec3 p = m.point(k % m.nx, k / m.nx);
        if (std::abs(p.x - rows[k].x) > 1e-3 || std::abs(p.y - rows[k].y) > 1e-3 || std::abs(p.z - rows[k].z) > 1e-3)
            throw std::invalid_argument("compare: CSV coordinates do not match the scenario grid");
        m.values[k] = rows[k].p_dbm;
        m.covered[k] = rows[k].covered ? 1 : 0;
        m.reachable[k] = scene.inside_any_box(p) ? 0 : 1;
    }
    return m;
}

} // namespace detail

/// Cellwise A - B over two runs on the same grid.
inline ComparisonResult compare_runs(const ScenarioSpec &sa, const std::vector<CsvRow> &ra, const ScenarioSpec &sb,
                                     const std::vector<CsvRow> &rb)
{
    if (!(sa.rx.grid == sb.rx.grid) || ra.size() != rb.size())
        throw std::invalid_argument("compare: runs do not share the same receiver grid");
    const PowerMap ma = detail::map_from_rows(sa, ra);
    const PowerMap mb = detail::map_from_rows(sb, rb);
    ComparisonResult r;
    r.delta.reserve(ra.size());
    for (std::size_t k = 0; k < ra.size(); ++k)
        r.delta.push_back({ra[k].x, ra[k].y, ra[k].z, delta_db(ra[k].p_dbm, rb[k].p_dbm), ra[k].covered});
    r.a = coverage_stats(ma, sa.budget, sa.tx.position);
    r.b = coverage_stats(mb, sb.budget, sb.tx.position);
    return r;
}

inline std::string delta_csv(const ComparisonResult &r)
{
    std::string out = "x_m,y_m,z_m,delta_db\n";
    char buf[96];
    for (const auto &row : r.delta)
    {
        std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.4f,", row.x, row.y, row.z);
        out += buf;
        out += format_dbm(row.p_dbm);
        out += '\n';
    }
    return out;
}

inline nlohmann::ordered_json comparison_to_json(const ComparisonResult &r)
{
    nlohmann::ordered_json j;
    j["covered_fraction_a"] = r.a.covered_fraction;
    j["covered_fraction_b"] = r.b.covered_fraction;
    j["covered_fraction_delta"] = r.a.covered_fraction - r.b.covered_fraction;
    j["blind_spots_a"] = r.a.blind_spots;
    j["blind_spots_b"] = r.b.blind_spots;
    j["blind_spots_delta"] = static_cast<long long>(r.a.blind_spots) - static_cast<long long>(r.b.blind_spots);
    j["reliable_range_delta_m"] = r.a.reliable_range_m - r.b.reliable_range_m;
    return j;
}

} // namespace uwbrt

#endif
