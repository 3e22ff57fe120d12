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

#include <uwbrt/link.hpp>
#include <uwbrt/materials.hpp>

#include <numbers>

using namespace uwbrt;
using Catch::Approx;

static constexpr double kF = 3.994e9;

TEST_CASE("Fresnel coefficients match the Snell-law form", "[materials]")
{
    const Material concrete = Material::concrete();
    for (double deg = 0.0; deg < 89.5; deg += 0.5)
    {
        const double th = deg * std::numbers::pi / 180.0;
        const auto got = fresnel(concrete, std::cos(th), kF);
        const auto want = oracle::fresnel_snell(7.0, 0.015, kF, th);
        CHECK(std::abs(got.gamma_perp - want.te) < 1e-12);
        CHECK(std::abs(got.gamma_par - want.tm) < 1e-12);
    }
}

TEST_CASE("Fresnel values at fixed angles", "[materials]")
{
    // concrete at 3.994 GHz; reference values from the Snell-law form evaluated independently
    struct Row
    {
        double deg;
        std::complex<double> te, tm;
    };
    const Row rows[] = {
        {0.0, {-0.45142757512439535, 0.0019196135384889536}, {0.45142757512439535, -0.0019196135384889536}},
        {30.0, {-0.5000117208302108, 0.0018751344672027319}, {0.4000108395422824, -0.001950157737676353}},
        {60.0, {-0.6666774684182254, 0.0015000868429704763}, {0.16667582326719374, -0.00206269503209203}},
        {85.0, {-0.9313277110395203, 0.0003725780043012845}, {-0.6013922217825505, -0.001284758175018845}},
    };
    for (const auto &r : rows)
    {
        const auto g = fresnel(Material::concrete(), std::cos(r.deg * std::numbers::pi / 180.0), kF);
        CHECK(std::abs(g.gamma_perp - r.te) < 1e-12);
        CHECK(std::abs(g.gamma_par - r.tm) < 1e-12);
    }
}

TEST_CASE("Brewster angle of a lossless eps_r = 7 half-space", "[materials]")
{
    const Material m = Material::dielectric(7.0, 0.0);
    const double brewster = std::atan(std::sqrt(7.0));
    CHECK(brewster * 180.0 / std::numbers::pi == Approx(69.30).margin(0.005));
    CHECK(std::abs(fresnel(m, std::cos(brewster), kF).gamma_par) < 1e-9);
    // the parallel coefficient changes sign across the Brewster angle
    CHECK(fresnel(m, std::cos(brewster - 0.01), kF).gamma_par.real() > 0.0);
    CHECK(fresnel(m, std::cos(brewster + 0.01), kF).gamma_par.real() < 0.0);
    const double normal = (std::sqrt(7.0) - 1.0) / (std::sqrt(7.0) + 1.0);
    CHECK(std::abs(fresnel(m, 1.0, kF).gamma_perp) == Approx(normal).epsilon(1e-12));
    CHECK(normal == Approx(0.4514).margin(5e-5));
}

TEST_CASE("Passivity, continuity and grazing limit", "[materials][property]")
{
    for (const Material &m : {Material::concrete(), Material::dielectric(2.5, 0.0), Material::dielectric(30.0, 1.0)})
    {
        double prev_perp = 0.0;
        for (int i = 1; i <= 2000; ++i)
        {
            const double c = i / 2000.0;
            const auto g = fresnel(m, c, kF);
            CHECK(std::abs(g.gamma_perp) <= 1.0 + 1e-12);
            CHECK(std::abs(g.gamma_par) <= 1.0 + 1e-12);
            if (i > 1)
                CHECK(std::abs(std::abs(g.gamma_perp) - prev_perp) < 1e-2);
            prev_perp = std::abs(g.gamma_perp);
        }
        const auto graze = fresnel(m, kGrazingCosClamp, kF);
        CHECK(std::abs(graze.gamma_perp + 1.0) < 1e-4);
        CHECK(std::abs(graze.gamma_par + 1.0) < 1e-3);
    }
    CHECK_THROWS_AS(fresnel(Material::concrete(), 0.0, kF), std::domain_error);
}

TEST_CASE("Energy balance for a lossless dielectric", "[materials][property]")
{
    const double eps = 4.0, n = 2.0;
    const Material m = Material::dielectric(eps, 0.0);
    for (double deg = 1.0; deg < 89.0; deg += 4.0)
    {
        const double th = deg * std::numbers::pi / 180.0;
        const double ci = std::cos(th), st = std::sin(th) / n, ct = std::sqrt(1.0 - st * st);
        const auto g = fresnel(m, ci, kF);
        const double t_perp = std::norm(1.0 + g.gamma_perp) * n * ct / ci;
        const double t_par = std::norm((1.0 + g.gamma_par) / n) * n * ct / ci;
        CHECK(std::norm(g.gamma_perp) + t_perp == Approx(1.0).epsilon(1e-12));
        CHECK(std::norm(g.gamma_par) + t_par == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("Perfect conductor cancels tangential field", "[materials]")
{
    const auto g = fresnel(Material::pec(), 0.3, kF);
    CHECK(g.gamma_perp == std::complex<double>(-1.0, 0.0));
    CHECK(g.gamma_par == std::complex<double>(1.0, 0.0));
    CHECK_THROWS_AS(complex_permittivity(Material::pec(), kF), std::domain_error);

    // incident plus reflected tangential E vanishes at the surface for any incident polarization
    const Vec3 n{0.0, 0.0, 1.0};
    const Vec3 d = normalized(Vec3{0.6, 0.3, -0.74});
    const Vec3 r = reflect_direction(d, n);
    const Vec3 e_perp = normalized(cross(d, n));
    const Vec3 e_par = cross(e_perp, d);
    for (double a : {0.0, 0.4, 1.2, 2.9})
    {
        const CVec3 e = std::complex<double>(std::cos(a), 0.3) * e_perp + std::complex<double>(std::sin(a), 0.0) * e_par;
        const CVec3 out = reflect_field(e, d, r, n, Material::pec(), kF);
        const CVec3 total = e + out;
        const double tangential = std::sqrt(std::norm(total.x) + std::norm(total.y));
        CHECK(tangential < 1e-12 * norm(e));
    }
}

TEST_CASE("Complex permittivity of concrete", "[materials]")
{
    const auto eps = complex_permittivity(Material::concrete(), kF);
    CHECK(eps.real() == 7.0);
    CHECK(eps.imag() == Approx(-0.015 / (2.0 * std::numbers::pi * kF * kVacuumPermittivity)));
    CHECK_THROWS_AS(complex_permittivity(Material::concrete(), 0.0), std::domain_error);
}
