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

#ifndef UWBRT_LINK_HPP
#define UWBRT_LINK_HPP

#include "antenna.hpp"
#include "diffraction.hpp"
#include "geometry.hpp"
#include "materials.hpp"
#include "pathfinder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace uwbrt
{

enum class BandWeighting
{
    Uniform,
    Gaussian // FWHM equal to the bandwidth
};

struct BandConfig
{
    double f_center = 3.994e9;
    double bandwidth = 4.68e8;
    int n_freq_samples = 9;
    BandWeighting weighting = BandWeighting::Uniform;

    bool operator==(const BandConfig &) const = default;
};

struct LinkBudget
{
    double tx_power_dbm = 0.0;
    double rx_sensitivity_dbm = -106.0;

    bool operator==(const LinkBudget &) const = default;
};

inline double wavenumber(double f) { return 2.0 * std::numbers::pi * f / kSpeedOfLight; }

inline void validate_band(const BandConfig &b)
{
    if (!(b.f_center > 0.0) || !(b.bandwidth >= 0.0) || b.bandwidth >= 2.0 * b.f_center)
        throw std::invalid_argument("BandConfig: need f_center > 0 and 0 <= bandwidth < 2 f_center");
    if (b.n_freq_samples < 1 || b.n_freq_samples % 2 == 0)
        throw std::invalid_argument("BandConfig: n_freq_samples must be a positive odd number");
}

struct BandSample
{
    double frequency;
    double weight; // weights sum to 1
};

/// Equally spaced samples over [f_center - B/2, f_center + B/2].
inline std::vector<BandSample> band_samples(const BandConfig &b)
{
    validate_band(b);
    const int n = b.n_freq_samples;
    std::vector<BandSample> out(static_cast<std::size_t>(n));
    const double sigma = b.bandwidth / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
    double total = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double off = (n == 1) ? 0.0 : -0.5 * b.bandwidth + b.bandwidth * i / (n - 1);
        double w = 1.0;
        if (b.weighting == BandWeighting::Gaussian && sigma > 0.0)
            w = std::exp(-off * off / (2.0 * sigma * sigma));
        out[static_cast<std::size_t>(i)] = {b.f_center + off, w};
        total += w;
    }
    for (auto &s : out)
        s.weight /= total;
    return out;
}

// ------------------------------------------------------------------------------------------------
// Field synthesis
// ------------------------------------------------------------------------------------------------

/// Specular reflection of E in the (e_perp, e_par) basis; incoming/outgoing are unit propagation directions.
inline CVec3 reflect_field(const CVec3 &e, const Vec3 &incoming, const Vec3 &outgoing, const Vec3 &normal,
                           const Material &m, double f)
{
    const double cos_i = std::max(-dot(incoming, normal), kGrazingCosClamp);
    const FresnelPair g = fresnel(m, cos_i, f);
    const Vec3 c = cross(incoming, normal);
    const double s = norm(c);
    if (s < 1e-9)
        return g.gamma_perp * e;
    const Vec3 e_perp = c / s;
    const Vec3 e_par_i = cross(e_perp, incoming);
    const Vec3 e_par_r = cross(e_perp, outgoing);
    return (g.gamma_perp * dot(e, e_perp)) * e_perp + (g.gamma_par * dot(e, e_par_i)) * e_par_r;
}

/// Edge-basis dyadic -b0' b0 D_s - phi' phi D_h applied to the field incident at the edge.
inline CVec3 diffract_field(const CVec3 &e, const Vec3 &incoming, const Vec3 &outgoing, const Vec3 &edge_dir,
                            const DiffractionCoefficients &d)
{
    Vec3 pi = cross(edge_dir, incoming);
    Vec3 po = cross(edge_dir, outgoing);
    if (norm(pi) < 1e-12 || norm(po) < 1e-12)
        return {};
    const Vec3 phi_i = -normalized(pi);
    const Vec3 beta_i = cross(incoming, phi_i);
    const Vec3 phi_o = normalized(po);
    const Vec3 beta_o = cross(outgoing, phi_o);
    return (-d.soft * dot(e, beta_i)) * beta_o + (-d.hard * dot(e, phi_i)) * phi_o;
}

/// Field at the receiver (before the receive antenna) for one path and frequency.
inline CVec3 path_field(const PropPath &path, const AntennaSpec &tx, double f)
{
    const auto pol = polarization_vector(tx, path.departure);
    if (!pol)
        return {};
    const double k = wavenumber(f);
    CVec3 e = std::sqrt(pattern_gain(tx, path.departure)) * to_complex(*pol);
    double s_i = 0.0, s_d = 0.0;
    const auto diff = path.diffraction_index();
    for (std::size_t i = 0; i < path.interactions.size(); ++i)
    {
        const Interaction &it = path.interactions[i];
        if (it.kind == InteractionKind::Reflection)
        {
            e = reflect_field(e, it.incoming, it.outgoing, it.normal, it.material, f);
            continue;
        }
        for (std::size_t s = 0; s <= i; ++s)
            s_i += path.segment_lengths[s];
        s_d = path.total_length - s_i;
        const Vec3 ed = it.edge.direction();
        WedgeGeometry g;
        g.n_wedge = it.edge.n_wedge;
        g.s_i = s_i;
        g.s_d = s_d;
        g.phi_prime = wedge_azimuth(it.edge, -it.incoming);
        g.phi = wedge_azimuth(it.edge, it.outgoing);
        g.beta0 = std::acos(std::clamp(dot(it.incoming, ed), -1.0, 1.0));
        if (!(g.beta0 > 1e-9 && g.beta0 < std::numbers::pi - 1e-9))
            return {};
        e = diffract_field(e, it.incoming, it.outgoing, ed, utd_coefficients(g, k));
    }
    const double spread = diff ? diffracted_spreading(s_i, s_d) / s_i : 1.0 / path.total_length;
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, -k * path.total_length));
    return (spread * phase) * e;
}

/// Upper bound of the free-space amplitude of a path in dB, used to drop negligible paths.
inline double path_spreading_bound_db(const PropPath &path, double f)
{
    const double lambda = kSpeedOfLight / f;
    double spread = 1.0 / path.total_length;
    if (const auto d = path.diffraction_index())
    {
        double s_i = 0.0;
        for (std::size_t s = 0; s <= *d; ++s)
            s_i += path.segment_lengths[s];
        const double s_d = path.total_length - s_i;
        if (s_i <= 0.0 || s_d <= 0.0)
            return -std::numeric_limits<double>::infinity();
        spread = diffracted_spreading(s_i, s_d) / s_i;
    }
    return 20.0 * std::log10(lambda / (4.0 * std::numbers::pi) * spread);
}

inline constexpr double kPathPrefilterDb = -250.0;

struct PathAmplitude
{
    Signature signature;
    std::vector<std::complex<double>> amplitude; // one per band sample
};

struct PowerResult
{
    double p_rx_dbm = -std::numeric_limits<double>::infinity();
    std::vector<PathAmplitude> per_path;
    bool covered = false;
};

inline bool is_covered(double p_rx_dbm, const LinkBudget &b) { return p_rx_dbm >= b.rx_sensitivity_dbm; }

namespace detail
{

// Amplitudes use the band-centre wavelength so that a single path is flat across the band.
inline double band_power_dbm(std::span<const PropPath> paths, const AntennaSpec &tx, const AntennaSpec &rx,
                             std::span<const BandSample> samples, double f_center, const LinkBudget &budget,
                             std::vector<PathAmplitude> *per_path)
{
    const double scale = kSpeedOfLight / f_center / (4.0 * std::numbers::pi);
    if (per_path)
        per_path->clear();
    std::vector<std::complex<double>> total(samples.size());
    bool any = false;
    for (const PropPath &p : paths)
    {
        if (path_spreading_bound_db(p, f_center) < kPathPrefilterDb)
            continue;
        any = true;
        PathAmplitude pa;
        for (std::size_t i = 0; i < samples.size(); ++i)
        {
            const double f = samples[i].frequency;
            const std::complex<double> a = scale * effective_receive_projection(rx, p.arrival, path_field(p, tx, f));
            total[i] += a;
            if (per_path)
                pa.amplitude.push_back(a);
        }
        if (per_path)
        {
            pa.signature = p.signature;
            per_path->push_back(std::move(pa));
        }
    }
    if (!any)
        return -std::numeric_limits<double>::infinity();
    double mean = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
        mean += samples[i].weight * std::norm(total[i]);
    return budget.tx_power_dbm + 10.0 * std::log10(mean);
}

} // namespace detail

/// Band-averaged received power of a signature-sorted path list.
inline PowerResult received_power(std::span<const PropPath> paths, const AntennaSpec &tx, const AntennaSpec &rx,
                                  const BandConfig &band, const LinkBudget &budget)
{
    const auto samples = band_samples(band);
    PowerResult r;
    r.p_rx_dbm = detail::band_power_dbm(paths, tx, rx, samples, band.f_center, budget, &r.per_path);
    r.covered = is_covered(r.p_rx_dbm, budget);
    return r;
}

/// Specular (SBR) and diffracted paths between two points, signature-sorted.
inline std::vector<PropPath> find_paths(const Scene &scene, const Vec3 &tx, const Vec3 &rx, const LaunchConfig &cfg)
{
    auto spec = find_specular_paths(scene, tx, rx, cfg);
    if (!cfg.enable_diffraction)
        return spec;
    return merge_paths(std::move(spec), find_diffraction_paths(scene, tx, rx, cfg));
}

// ------------------------------------------------------------------------------------------------
// Grids
// ------------------------------------------------------------------------------------------------

struct RxGrid
{
    double x_min = 0.0, x_max = 40.0;
    double y_min = 0.0, y_max = 20.0;
    double spacing = 0.25;
    double height = 0.2;

    bool operator==(const RxGrid &) const = default;

    std::size_t nx() const { return count(x_min, x_max); }
    std::size_t ny() const { return count(y_min, y_max); }
    GridLayout layout() const { return {x_min, y_min, spacing, nx(), ny(), height}; }

  private:
    std::size_t count(double lo, double hi) const
    {
        if (!(spacing > 0.0) || !(hi >= lo))
            throw std::invalid_argument("RxGrid: need spacing > 0 and max >= min");
        return static_cast<std::size_t>(std::floor((hi - lo) / spacing + 1e-9)) + 1;
    }
};

struct MapMetadata
{
    std::uint64_t scenario_hash = 0;
    LaunchConfig engine;
    double tx_gain_max_dbi = kDefaultGainMaxDbi; // value applied after the directivity check
    double rx_gain_max_dbi = kDefaultGainMaxDbi;
};

// Row-major map, j (y index) outer.
struct PowerMap
{
    RxGrid grid;
    std::size_t nx = 0, ny = 0;
    std::vector<double> values; // dBm, -inf where unreachable or pathless
    std::vector<std::uint8_t> covered;
    std::vector<std::uint8_t> reachable;
    MapMetadata metadata;

    std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
    Vec3 point(std::size_t i, std::size_t j) const { return grid.layout().point(i, j); }
};

// One antenna/band combination evaluated on a shared path search.
struct LinkSetup
{
    AntennaSpec tx;
    AntennaSpec rx; // position ignored; placed at each grid point
    BandConfig band;
    LinkBudget budget;
};

/// Power maps for several setups sharing TX position, scene and engine config.
inline std::vector<PowerMap> evaluate_grid(const Scene &scene, std::span<const LinkSetup> setups, const RxGrid &grid,
                                           const LaunchConfig &cfg, unsigned workers = 1)
{
    if (setups.empty())
        return {};
    const Vec3 tx = setups.front().tx.position;
    for (const auto &s : setups)
    {
        if (!(norm(s.tx.position - tx) == 0.0))
            throw std::invalid_argument("evaluate_grid: all setups must share the TX position");
        validate_band(s.band);
    }
    if (scene.inside_any_box(tx))
        throw std::invalid_argument("evaluate_grid: transmitter inside geometry");
    const GridLayout layout = grid.layout();
    const std::size_t nx = layout.nx, ny = layout.ny;

    const SbrTree tree(scene, tx, cfg);
    const auto candidates = tree.captured_grid(layout);
    const int exhaustive = std::min(cfg.exhaustive_order, cfg.max_reflections);
    std::optional<DiffractionTracer> diff;
    if (cfg.enable_diffraction)
        diff.emplace(scene, tx, cfg);

    std::vector<std::vector<BandSample>> samples;
    for (const auto &s : setups)
        samples.push_back(band_samples(s.band));

    std::vector<PowerMap> maps(setups.size());
    for (std::size_t m = 0; m < maps.size(); ++m)
    {
        maps[m].grid = grid;
        maps[m].nx = nx;
        maps[m].ny = ny;
        maps[m].values.assign(nx * ny, -std::numeric_limits<double>::infinity());
        maps[m].covered.assign(nx * ny, 0);
        maps[m].reachable.assign(nx * ny, 0);
        maps[m].metadata.engine = cfg;
        maps[m].metadata.tx_gain_max_dbi = setups[m].tx.gain_max_dbi;
        maps[m].metadata.rx_gain_max_dbi = setups[m].rx.gain_max_dbi;
    }

    // sequences captured at nearby lattice points; refinement rejects the ones without a valid path here
    const auto radius = static_cast<std::size_t>(std::max(0, cfg.candidate_share_radius));
    auto shared_candidates = [&](std::size_t i, std::size_t j) {
        if (radius == 0)
            return candidates[j * nx + i];
        std::vector<std::uint32_t> out;
        for (std::size_t jj = j - std::min(j, radius); jj <= std::min(ny - 1, j + radius); ++jj)
            for (std::size_t ii = i - std::min(i, radius); ii <= std::min(nx - 1, i + radius); ++ii)
                out.insert(out.end(), candidates[jj * nx + ii].begin(), candidates[jj * nx + ii].end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&]() {
        try
        {
            for (std::size_t c = next++; c < nx * ny && !failed; c = next++)
            {
                const Vec3 rx = layout.point(c % nx, c / nx);
                if (scene.inside_any_box(rx))
                    continue;
                auto paths = tree.refine(shared_candidates(c % nx, c / nx), rx);
                if (exhaustive > 0)
                    paths = merge_paths(std::move(paths),
                                        image_method_paths(scene, tx, rx, exhaustive, cfg.enumeration_budget));
                if (diff)
                    paths = merge_paths(std::move(paths), diff->paths_to(rx));
                for (std::size_t m = 0; m < setups.size(); ++m)
                {
                    AntennaSpec ra = setups[m].rx;
                    ra.position = rx;
                    const double p =
                        detail::band_power_dbm(paths, setups[m].tx, ra, samples[m], setups[m].band.f_center,
                                               setups[m].budget, nullptr);
                    maps[m].reachable[c] = 1;
                    maps[m].values[c] = p;
                    maps[m].covered[c] = is_covered(p, setups[m].budget) ? 1 : 0;
                }
            }
        }
        catch (...)
        {
            if (!failed.exchange(true))
                failure = std::current_exception();
        }
    };
    const unsigned n_threads = std::max(1u, workers);
    if (n_threads == 1)
    {
        work();
    }
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back(work);
        for (auto &t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);
    return maps;
}

inline PowerMap evaluate_grid(const Scene &scene, const AntennaSpec &tx, const AntennaSpec &rx_template,
                              const RxGrid &grid, const LaunchConfig &cfg, const BandConfig &band,
                              const LinkBudget &budget, unsigned workers = 1)
{
    const LinkSetup setup{tx, rx_template, band, budget};
    return std::move(evaluate_grid(scene, std::span<const LinkSetup>(&setup, 1), grid, cfg, workers).front());
}

// ------------------------------------------------------------------------------------------------
// Coverage statistics
// ------------------------------------------------------------------------------------------------

struct CoverageStats
{
    std::size_t reachable_points = 0;
    std::size_t covered_points = 0;
    double covered_fraction = 0.0;
    double reliable_range_m = 0.0; // horizontal distance from the TX
    std::size_t blind_spots = 0;
    double max_power_dbm = -std::numeric_limits<double>::infinity();
};

/// Covered fraction of reachable points within a horizontal radius of the TX (1 if there are none).
inline double covered_fraction_within(const PowerMap &map, const Vec3 &tx, double radius)
{
    std::size_t n = 0, c = 0;
    for (std::size_t j = 0; j < map.ny; ++j)
        for (std::size_t i = 0; i < map.nx; ++i)
        {
            const std::size_t k = map.index(i, j);
            if (!map.reachable[k])
                continue;
            const Vec3 p = map.point(i, j);
            if (std::hypot(p.x - tx.x, p.y - tx.y) > radius)
                continue;
            ++n;
            c += map.covered[k];
        }
    return n == 0 ? 1.0 : static_cast<double>(c) / static_cast<double>(n);
}

/// Number of 4-connected components of uncovered reachable cells.
inline std::size_t count_blind_spots(std::span<const std::uint8_t> uncovered, std::size_t nx, std::size_t ny)
{
    std::vector<std::uint8_t> seen(nx * ny, 0);
    std::vector<std::size_t> stack;
    std::size_t count = 0;
    for (std::size_t start = 0; start < nx * ny; ++start)
    {
        if (!uncovered[start] || seen[start])
            continue;
        ++count;
        seen[start] = 1;
        stack.push_back(start);
        while (!stack.empty())
        {
            const std::size_t c = stack.back();
            stack.pop_back();
            const std::size_t i = c % nx, j = c / nx;
            auto push = [&](std::size_t k) {
                if (uncovered[k] && !seen[k])
                {
                    seen[k] = 1;
                    stack.push_back(k);
                }
            };
            if (i > 0)
                push(c - 1);
            if (i + 1 < nx)
                push(c + 1);
            if (j > 0)
                push(c - nx);
            if (j + 1 < ny)
                push(c + nx);
        }
    }
    return count;
}

inline CoverageStats coverage_stats(const PowerMap &map, const LinkBudget &budget, const Vec3 &tx)
{
    CoverageStats s;
    std::vector<std::pair<double, bool>> by_distance;
    std::vector<std::uint8_t> uncovered(map.nx * map.ny, 0);
    for (std::size_t j = 0; j < map.ny; ++j)
        for (std::size_t i = 0; i < map.nx; ++i)
        {
            const std::size_t k = map.index(i, j);
            if (!map.reachable[k])
                continue;
            const bool cov = is_covered(map.values[k], budget);
            ++s.reachable_points;
            s.covered_points += cov ? 1 : 0;
            uncovered[k] = cov ? 0 : 1;
            s.max_power_dbm = std::max(s.max_power_dbm, map.values[k]);
            const Vec3 p = map.point(i, j);
            by_distance.emplace_back(std::hypot(p.x - tx.x, p.y - tx.y), cov);
        }
    if (s.reachable_points > 0)
        s.covered_fraction = static_cast<double>(s.covered_points) / static_cast<double>(s.reachable_points);
    std::sort(by_distance.begin(), by_distance.end());
    std::size_t n = 0, c = 0;
    for (std::size_t k = 0; k < by_distance.size(); ++k)
    {
        ++n;
        c += by_distance[k].second ? 1 : 0;
        const bool boundary = k + 1 == by_distance.size() || by_distance[k + 1].first != by_distance[k].first;
        if (boundary && c > 0 && static_cast<double>(c) >= 0.95 * static_cast<double>(n))
            s.reliable_range_m = by_distance[k].first;
    }
    s.blind_spots = count_blind_spots(uncovered, map.nx, map.ny);
    return s;
}

} // namespace uwbrt

#endif
