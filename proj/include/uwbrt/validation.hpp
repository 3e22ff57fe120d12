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

// Closed-form oracle suites run by `uwbrt validate`.

#ifndef UWBRT_VALIDATION_HPP
#define UWBRT_VALIDATION_HPP

#include "antenna.hpp"
#include "diffraction.hpp"
#include "geometry.hpp"
#include "link.hpp"
#include "materials.hpp"
#include "pathfinder.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uwbrt
{

struct OracleCheck
{
    std::string suite;
    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0; // pass when |measured - expected| <= tolerance
    bool pass = false;
};

inline const std::vector<std::string> &oracle_suite_names()
{
    static const std::vector<std::string> names = {"friis",          "two-ray",       "image-sbr",
                                                   "brewster",       "utd-knife-edge", "pec-boundary"};
    return names;
}

namespace oracle
{

inline OracleCheck check(std::string suite, std::string name, double measured, double expected, double tol)
{
    const bool ok = std::isfinite(measured) && std::abs(measured - expected) <= tol;
    return {std::move(suite), std::move(name), measured, expected, tol, ok};
}

inline double friis_dbm(double d, double f, double gain_dbi_each, double tx_dbm)
{
    const double lambda = kSpeedOfLight / f;
    return tx_dbm + 2.0 * gain_dbi_each + 20.0 * std::log10(lambda / (4.0 * std::numbers::pi * d));
}

// Vertical-polarization ground reflection with the PEC limit +1.
inline std::complex<double> gamma_vertical(const Material &m, double cos_t, double f)
{
    if (m.kind == MaterialKind::Pec)
        return 1.0;
    const std::complex<double> eps(m.eps_r, -m.sigma / (2.0 * std::numbers::pi * f * kVacuumPermittivity));
    const std::complex<double> root = std::sqrt(eps - (1.0 - cos_t * cos_t));
    return (eps * cos_t - root) / (eps * cos_t + root);
}

struct TwoRay
{
    double power_dbm;
    double null_floor_dbm; // power if the two rays were exactly out of phase
};

// Vertical dipoles of identical pattern at heights ht, hr, horizontal distance d.
inline TwoRay two_ray(double ht, double hr, double d, const Material &ground, const BandConfig &band,
                      const LinkBudget &budget, double g0, double n)
{
    const double r1 = std::hypot(d, ht - hr);
    const double r2 = std::hypot(d, ht + hr);
    const double g1 = g0 * std::pow(d / r1, n);
    const double g2 = g0 * std::pow(d / r2, n);
    const double scale = kSpeedOfLight / band.f_center / (4.0 * std::numbers::pi);
    double p = 0.0, floor = 0.0;
    for (const auto &s : band_samples(band))
    {
        const double k = wavenumber(s.frequency);
        const std::complex<double> a1 = g1 * std::exp(std::complex<double>(0.0, -k * r1)) / r1;
        const std::complex<double> a2 =
            gamma_vertical(ground, (ht + hr) / r2, s.frequency) * g2 * std::exp(std::complex<double>(0.0, -k * r2)) / r2;
        p += s.weight * std::norm(scale * (a1 + a2));
        floor += s.weight * std::pow(scale * (std::abs(a1) - std::abs(a2)), 2);
    }
    return {budget.tx_power_dbm + 10.0 * std::log10(p), budget.tx_power_dbm + 10.0 * std::log10(floor)};
}

// Integral from v to infinity of exp(-i pi t^2 / 2) by composite Simpson plus the leading asymptotic tail.
inline std::complex<double> fresnel_integral_tail(double v)
{
    const double upper = 60.0;
    const int n = 600000;
    const double h = (upper - v) / n;
    auto f = [](double t) { return std::exp(std::complex<double>(0.0, -0.5 * std::numbers::pi * t * t)); };
    std::complex<double> acc = f(v) + f(upper);
    for (int i = 1; i < n; ++i)
        acc += (i % 2 ? 4.0 : 2.0) * f(v + i * h);
    const std::complex<double> tail = std::complex<double>(0.0, -1.0) * f(upper) / (std::numbers::pi * upper);
    return acc * h / 3.0 + tail;
}

/// Kirchhoff knife-edge field relative to free space, in dB.
inline double knife_edge_db(double v)
{
    const std::complex<double> e = std::complex<double>(0.5, 0.5) * fresnel_integral_tail(v);
    return 20.0 * std::log10(std::abs(e));
}

/// UTD half-plane field relative to free space (dB) for TX and RX at equal depth below the edge.
inline double half_plane_utd_db(double v, double d1, double d2, double f)
{
    const double lambda = kSpeedOfLight / f;
    const double h = v / std::sqrt(2.0 * (d1 + d2) / (lambda * d1 * d2));
    WedgeGeometry g;
    g.n_wedge = 2.0;
    g.s_i = std::hypot(d1, h);
    g.s_d = std::hypot(d2, h);
    g.phi_prime = std::atan2(d1, h);
    g.phi = 2.0 * std::numbers::pi + std::atan2(-d2, h);
    g.beta0 = std::numbers::pi / 2.0;
    const auto c = utd_coefficients(g, wavenumber(f));
    // incident field polarized at 45 degrees to the edge
    const double mag2 = 0.5 * (std::norm(c.soft) + std::norm(c.hard));
    const double spread = diffracted_spreading(g.s_i, g.s_d) / g.s_i;
    return 10.0 * std::log10(mag2) + 20.0 * std::log10(spread * (d1 + d2));
}

// Box whose top-right edge (x = 2, z = 0) runs along y; no floor.
inline Scene shadow_scene() { return Scene({Aabb{{0.0, -10.0, -10.0}, {2.0, 10.0, 0.0}, 0}}, std::nullopt); }

/// Largest dB change of total received power between consecutive receiver positions.
inline double max_step_db(const Scene &scene, const AntennaSpec &tx, const AntennaSpec &rx_template,
                          const std::vector<Vec3> &points, const LaunchConfig &cfg)
{
    BandConfig band;
    band.n_freq_samples = 1;
    double prev = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        AntennaSpec rx = rx_template;
        rx.position = points[i];
        const auto paths = find_paths(scene, tx.position, points[i], cfg);
        const double p = received_power(paths, tx, rx, band, {}).p_rx_dbm;
        if (i > 0)
            worst = std::max(worst, std::abs(p - prev));
        prev = p;
    }
    return worst;
}

// Receiver positions 5 m beyond the edge, straddling the boundary ray through the edge along dir (x-z plane).
inline std::vector<Vec3> boundary_crossing(const Vec3 &dir, double step = 1e-3, int half = 10)
{
    const Vec3 edge{2.0, 0.0, 0.0};
    const Vec3 u = normalized(dir);
    const Vec3 across{-u.z, 0.0, u.x};
    std::vector<Vec3> pts;
    for (int i = -half; i <= half; ++i)
        pts.push_back(edge + u * 5.0 + across * (step * (i + 0.5)));
    return pts;
}

} // namespace oracle

/// Runs one suite; throws std::invalid_argument for an unknown name.
inline std::vector<OracleCheck> run_oracle_suite(std::string_view suite)
{
    const std::string s(suite);
    std::vector<OracleCheck> out;
    const BandConfig band;
    const LinkBudget budget;
    const double g0_dbi = kDefaultGainMaxDbi;

    if (suite == "friis")
    {
        const Scene empty;
        LaunchConfig cfg;
        cfg.enable_diffraction = false;
        auto at = [&](double d) {
            const AntennaSpec tx = make_antenna({0.0, 0.0, 1.5}, Polarization::Vertical);
            const AntennaSpec rx = make_antenna({d, 0.0, 1.5}, Polarization::Vertical);
            return received_power(trace_sbr(empty, tx.position, rx.position, cfg), tx, rx, band, budget).p_rx_dbm;
        };
        out.push_back(oracle::check(s, "los 1 m", at(1.0), -38.5, 0.05));
        double worst = 0.0;
        for (int i = 0; i <= 40; ++i)
        {
            const double d = 0.5 * std::pow(100.0, i / 40.0);
            worst = std::max(worst, std::abs(at(d) - oracle::friis_dbm(d, band.f_center, g0_dbi, 0.0)));
        }
        out.push_back(oracle::check(s, "sweep 0.5-50 m max error (dB)", worst, 0.0, 0.01));
        return out;
    }
    if (suite == "two-ray")
    {
        LaunchConfig cfg;
        cfg.enable_diffraction = false;
        cfg.max_reflections = 2;
        for (const Material &m : {Material::pec(), Material::concrete()})
        {
            const Scene scene({}, FloorPlane{1000.0, 1000.0, 0}, {m});
            double worst = 0.0;
            for (int i = 0; i <= 58; ++i)
            {
                const double d = 1.0 + 0.5 * i;
                const AntennaSpec tx = make_antenna({500.0, 500.0, 1.5}, Polarization::Vertical);
                const AntennaSpec rx = make_antenna({500.0 + d, 500.0, 0.2}, Polarization::Vertical);
                const auto ref = oracle::two_ray(1.5, 0.2, d, m, band, budget, tx.gain_max_linear(), tx.pattern_exponent);
                if (ref.power_dbm - ref.null_floor_dbm < 3.0)
                    continue;
                const double p =
                    received_power(trace_sbr(scene, tx.position, rx.position, cfg), tx, rx, band, budget).p_rx_dbm;
                worst = std::max(worst, std::abs(p - ref.power_dbm));
            }
            out.push_back(oracle::check(s, std::string(m.kind == MaterialKind::Pec ? "pec" : "concrete") +
                                               " ground 1-30 m max error (dB)",
                                        worst, 0.0, 0.5));
        }
        return out;
    }
    if (suite == "image-sbr")
    {
        const Scene walls({Aabb{{-1.0, -60.0, -60.0}, {0.0, 60.0, 60.0}, 0},
                           Aabb{{1.5, -60.0, -60.0}, {2.5, 60.0, 60.0}, 0}},
                          std::nullopt);
        const Vec3 tx{0.4, 0.0, 0.0}, rx{1.1, 8.0, 0.3};
        LaunchConfig cfg;
        cfg.tessellation_order = 5;
        cfg.max_reflections = 5;
        cfg.enable_diffraction = false;
        const auto sbr = trace_sbr(walls, tx, rx, cfg);
        const auto img = image_method_paths(walls, tx, rx, 5);
        out.push_back(oracle::check(s, "path count", static_cast<double>(sbr.size()), static_cast<double>(img.size()), 0.0));
        double worst_len = sbr.size() == img.size() ? 0.0 : 1.0;
        for (std::size_t i = 0; i < std::min(sbr.size(), img.size()); ++i)
        {
            if (sbr[i].signature != img[i].signature)
                worst_len = 1.0;
            worst_len = std::max(worst_len, std::abs(sbr[i].total_length / img[i].total_length - 1.0));
        }
        out.push_back(oracle::check(s, "signature match and max relative length error", worst_len, 0.0, 1e-6));
        const AntennaSpec ta = make_antenna(tx, Polarization::Vertical);
        const AntennaSpec ra = make_antenna(rx, Polarization::Vertical);
        out.push_back(oracle::check(s, "summed power difference (dB)",
                                    received_power(sbr, ta, ra, band, budget).p_rx_dbm -
                                        received_power(img, ta, ra, band, budget).p_rx_dbm,
                                    0.0, 0.1));
        return out;
    }
    if (suite == "brewster")
    {
        const Material m = Material::dielectric(7.0, 0.0);
        const double theta_b = std::atan(std::sqrt(7.0));
        out.push_back(oracle::check(s, "brewster angle (deg)", theta_b * 180.0 / std::numbers::pi, 69.30, 0.005));
        out.push_back(oracle::check(s, "|gamma_par| at brewster", std::abs(fresnel(m, std::cos(theta_b), band.f_center).gamma_par),
                                    0.0, 1e-9));
        const double normal = (std::sqrt(7.0) - 1.0) / (std::sqrt(7.0) + 1.0);
        const auto g = fresnel(m, 1.0, band.f_center);
        out.push_back(oracle::check(s, "|gamma_perp| normal incidence", std::abs(g.gamma_perp), normal, 1e-12));
        out.push_back(oracle::check(s, "|gamma_par| normal incidence", std::abs(g.gamma_par), normal, 1e-12));
        return out;
    }
    if (suite == "utd-knife-edge")
    {
        double worst = 0.0;
        for (double v = 1.0; v <= 3.0 + 1e-12; v += 0.25)
            worst = std::max(worst, std::abs(oracle::half_plane_utd_db(v, 5.0, 5.0, band.f_center) - oracle::knife_edge_db(v)));
        out.push_back(oracle::check(s, "half-plane vs knife-edge, v in [1,3], max error (dB)", worst, 0.0, 1.5));
        const Scene scene = oracle::shadow_scene();
        LaunchConfig cfg;
        cfg.max_reflections = 1;
        cfg.max_reflections_with_diffraction = 0;
        const Vec3 txp{-1.0, 0.0, 1.0};
        for (const Polarization p : {Polarization::Vertical, Polarization::HorizontalTransverse})
        {
            const AntennaSpec tx = make_antenna(txp, p);
            const AntennaSpec rx = make_antenna({}, p);
            const std::string label = p == Polarization::Vertical ? " (vertical)" : " (horizontal)";
            // incidence boundary: TX through the edge; reflection boundary: TX image through the edge
            const double isb = oracle::max_step_db(scene, tx, rx, oracle::boundary_crossing({3.0, 0.0, -1.0}), cfg);
            const double rsb = oracle::max_step_db(scene, tx, rx, oracle::boundary_crossing({3.0, 0.0, 1.0}), cfg);
            out.push_back(oracle::check(s, "incidence shadow boundary max 1 mm jump (dB)" + label, isb, 0.0, 0.5));
            out.push_back(oracle::check(s, "reflection shadow boundary max 1 mm jump (dB)" + label, rsb, 0.0, 0.5));
        }
        return out;
    }
    if (suite == "pec-boundary")
    {
        std::mt19937_64 rng(20260417);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const Vec3 n{0.0, 0.0, 1.0};
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial)
        {
            Vec3 d{u(rng), u(rng), -std::abs(u(rng)) - 1e-3};
            d = normalized(d);
            const Vec3 a = normalized(cross(d, Vec3{u(rng), u(rng), u(rng)}));
            const Vec3 b = cross(d, a);
            const CVec3 e = std::complex<double>(u(rng), u(rng)) * a + std::complex<double>(u(rng), u(rng)) * b;
            const CVec3 r = reflect_field(e, d, reflect_direction(d, n), n, Material::pec(), band.f_center);
            const CVec3 total = e + r;
            const double tangential = std::sqrt(std::norm(total.x) + std::norm(total.y));
            worst = std::max(worst, tangential / norm(e));
        }
        out.push_back(oracle::check(s, "max relative tangential E at PEC surface", worst, 0.0, 1e-10));
        return out;
    }
    throw std::invalid_argument("unknown oracle suite '" + s + "'");
}

} // namespace uwbrt

#endif
