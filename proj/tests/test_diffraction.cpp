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

#include <uwbrt/diffraction.hpp>
#include <uwbrt/link.hpp>
#include <uwbrt/validation.hpp>

#include <numbers>

using namespace uwbrt;
using Catch::Approx;

TEST_CASE("Transition function against the Fresnel-integral form", "[diffraction]")
{
    for (const auto &s : ::oracle::kTransitionTable)
    {
        const auto f = transition_function(s.x);
        CHECK(std::abs(f - std::complex<double>(s.re, s.im)) < 1e-7 * std::max(1.0, std::abs(f)));
    }
    // large argument tends to one
    CHECK(std::abs(transition_function(10.0)) == Approx(1.0).margin(0.02));
    CHECK(std::abs(transition_function(1e4) - 1.0) < 1e-3);
    // small argument behaves like sqrt(pi x) e^{i pi/4}
    const double x = 1e-8;
    const auto small = transition_function(x);
    CHECK(std::abs(small) == Approx(std::sqrt(std::numbers::pi * x)).epsilon(1e-3));
    CHECK(std::arg(small) == Approx(std::numbers::pi / 4.0).margin(1e-3));
}

TEST_CASE("Transition function is continuous across the series/asymptotic switch", "[diffraction]")
{
    double prev = std::abs(transition_function(0.5));
    for (double x = 0.5; x < 6.0; x += 1e-3)
    {
        const double m = std::abs(transition_function(x));
        CHECK(std::abs(m - prev) < 2e-3);
        prev = m;
    }
}

TEST_CASE("Wedge coefficients are reciprocal", "[diffraction][property]")
{
    const double k = wavenumber(3.994e9);
    for (double phi_p : {0.3, 0.9, 1.7, 2.5})
        for (double phi : {0.2, 1.1, 2.2, 3.6, 4.5})
        {
            WedgeGeometry a;
            a.s_i = 2.0;
            a.s_d = 3.5;
            a.phi = phi;
            a.phi_prime = phi_p;
            a.beta0 = 1.1;
            WedgeGeometry b = a;
            std::swap(b.phi, b.phi_prime);
            std::swap(b.s_i, b.s_d);
            const auto ca = utd_coefficients(a, k);
            const auto cb = utd_coefficients(b, k);
            CHECK(std::abs(ca.soft - cb.soft) < 1e-12 * std::abs(ca.soft) + 1e-15);
            CHECK(std::abs(ca.hard - cb.hard) < 1e-12 * std::abs(ca.hard) + 1e-15);
        }
}

TEST_CASE("Wedge coefficients on the shadow boundaries", "[diffraction]")
{
    // the coefficient jumps with the geometrical-optics field it compensates; on the boundary
    // itself it takes the mean of both one-sided limits
    const double k = wavenumber(3.994e9);
    WedgeGeometry g;
    g.s_i = 2.0;
    g.s_d = 5.0;
    g.phi_prime = 0.7;
    for (double phi : {std::numbers::pi + 0.7, std::numbers::pi - 0.7})
    {
        g.phi = phi;
        const auto on = utd_coefficients(g, k);
        g.phi = phi + 1e-10;
        const auto above = utd_coefficients(g, k);
        g.phi = phi - 1e-10;
        const auto below = utd_coefficients(g, k);
        CHECK(std::isfinite(std::abs(above.soft)));
        CHECK(std::isfinite(std::abs(below.hard)));
        CHECK(std::abs(on.soft - 0.5 * (above.soft + below.soft)) < 1e-6 * std::abs(above.soft));
        CHECK(std::abs(on.hard - 0.5 * (above.hard + below.hard)) < 1e-6 * std::abs(above.hard));
        // away from the boundary the one-sided limit is approached smoothly
        g.phi = phi + 1e-6;
        CHECK(std::abs(utd_coefficients(g, k).soft - above.soft) < 1e-3 * std::abs(above.soft));
    }
    CHECK_THROWS_AS(utd_coefficients(WedgeGeometry{1.5, 0.0, 1.0}, k), std::invalid_argument);
}

TEST_CASE("Half-plane deep shadow follows the knife-edge integral", "[diffraction]")
{
    for (const auto &s : ::oracle::kKnifeEdgeTable)
    {
        if (s.v < 1.0)
            continue;
        CHECK(uwbrt::oracle::knife_edge_db(s.v) == Approx(s.db).margin(1e-6));
        CHECK(std::abs(uwbrt::oracle::half_plane_utd_db(s.v, 5.0, 5.0, 3.994e9) - s.db) < 1.5);
    }
}

TEST_CASE("Diffracted spreading and wedge azimuth", "[diffraction]")
{
    CHECK(diffracted_spreading(1.0, 1.0) == Approx(std::sqrt(0.5)));
    // plane-wave limit 1/sqrt(s_d)
    CHECK(diffracted_spreading(1e9, 4.0) == Approx(0.5).epsilon(1e-8));
    CHECK_THROWS_AS(diffracted_spreading(0.0, 1.0), std::invalid_argument);

    // edge along +y with faces +z (n1) and +x (n2) meeting at the origin; 270 degree exterior
    EdgeSpec e;
    e.a = {0.0, 0.0, 0.0};
    e.b = {0.0, 1.0, 0.0};
    e.n1 = {0.0, 0.0, 1.0};
    e.n2 = {1.0, 0.0, 0.0};
    const double o_face = wedge_azimuth(e, -e.n2 + e.n1 * 1e-12);
    CHECK(o_face < 1e-6);
    CHECK(wedge_azimuth(e, e.n1) == Approx(std::numbers::pi / 2.0));
    CHECK(wedge_azimuth(e, e.n2) == Approx(std::numbers::pi));
    CHECK(wedge_azimuth(e, -e.n1) == Approx(1.5 * std::numbers::pi));
}
