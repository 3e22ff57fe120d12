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

#ifndef UWBRT_DIFFRACTION_HPP
#define UWBRT_DIFFRACTION_HPP

#include "geometry.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace uwbrt
{

// Azimuths are measured around the edge from the o-face (0) towards the n-face (n_wedge * pi).
struct WedgeGeometry
{
    double n_wedge = 1.5;
    double s_i = 1.0;       // source to edge (m)
    double s_d = 1.0;       // edge to observer (m)
    double phi = 0.0;       // observer azimuth (rad)
    double phi_prime = 0.0; // source azimuth (rad)
    double beta0 = std::numbers::pi / 2.0;
};

struct DiffractionCoefficients
{
    std::complex<double> soft; // acts on the beta-hat components
    std::complex<double> hard; // acts on the phi-hat components
};

namespace detail
{

// Lentz evaluation of the erfc continued fraction at z = sqrt(pi)(1-i)u/2, i.e. with 2z^2 + 1 = 1 - i pi u^2.
inline std::complex<double> fresnel_cf(double u)
{
    constexpr double kTiny = 1e-300;
    std::complex<double> b(1.0, -std::numbers::pi * u * u);
    std::complex<double> cc = 1.0 / kTiny;
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    double n = -1.0;
    for (int k = 2; k < 100000; ++k)
    {
        n += 2.0;
        const double a = -n * (n + 1.0);
        b += 4.0;
        d = 1.0 / (a * d + b);
        cc = b + a / cc;
        const std::complex<double> del = cc * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
            break;
    }
    return h;
}

// C(u) + i S(u) by power series; accurate for u < 1.5.
inline std::complex<double> fresnel_series(double u)
{
    double c = 0.0, s = 0.0;
    const double x = 0.5 * std::numbers::pi * u * u;
    double term = 1.0; // x^n / n!
    for (int n = 0; n < 300; ++n)
    {
        const double contrib = u * term / (2 * n + 1);
        const double sign = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
        if (n % 2 == 0)
            c += sign * contrib;
        else
            s += sign * contrib;
        if (n > 2 && contrib < 1e-18)
            break;
        term *= x / (n + 1);
    }
    return {c, s};
}

inline constexpr double kSeriesLimit = 1.5;

} // namespace detail

/// T(u) = integral from u to infinity of exp(i pi t^2 / 2) dt, u >= 0.
inline std::complex<double> fresnel_tail(double u)
{
    if (!(u >= 0.0))
        throw std::domain_error("fresnel_tail: u must be non-negative");
    if (u < detail::kSeriesLimit)
        return std::complex<double>(0.5, 0.5) - detail::fresnel_series(u);
    return u * std::exp(std::complex<double>(0.0, 0.5 * std::numbers::pi * u * u)) * detail::fresnel_cf(u);
}

/// UTD transition function F(x) = 2j sqrt(x) exp(jx) int_{sqrt x}^inf exp(-j tau^2) dtau, x >= 0.
inline std::complex<double> transition_function(double x)
{
    if (!(x >= 0.0))
        throw std::domain_error("transition_function: x must be non-negative");
    if (x == 0.0)
        return {0.0, 0.0};
    const double pi = std::numbers::pi;
    const double u = std::sqrt(2.0 * x / pi);
    if (u < detail::kSeriesLimit)
    {
        const std::complex<double> tail = std::conj(std::complex<double>(0.5, 0.5) - detail::fresnel_series(u));
        return std::complex<double>(0.0, 2.0) * std::sqrt(x) * std::exp(std::complex<double>(0.0, x)) * std::sqrt(pi / 2.0) * tail;
    }
    // the exp(jx) factor cancels the phase of the tail exactly
    return std::complex<double>(0.0, 2.0) * x * std::conj(detail::fresnel_cf(u));
}

namespace detail
{

// cot((pi +- beta) / 2n) F(kL a+-(beta)), with the shadow-boundary limit near its pole.
inline std::complex<double> cot_transition(double beta, bool plus, double n, double kL)
{
    const double pi = std::numbers::pi;
    double big_n = 0.0, eps = 0.0;
    if (plus)
    {
        big_n = std::round((beta + pi) / (2.0 * pi * n));
        eps = pi + beta - 2.0 * pi * n * big_n;
    }
    else
    {
        big_n = std::round((beta - pi) / (2.0 * pi * n));
        eps = pi - beta + 2.0 * pi * n * big_n;
    }
    const std::complex<double> e4 = std::exp(std::complex<double>(0.0, pi / 4.0));
    if (std::abs(eps) < 1e-9)
    {
        const double sgn = (eps > 0.0) ? 1.0 : (eps < 0.0 ? -1.0 : 0.0);
        return n * (std::sqrt(2.0 * pi * kL) * sgn - 2.0 * kL * eps * e4) * e4;
    }
    const double half = 0.5 * (2.0 * pi * n * big_n - beta);
    const double a = 2.0 * std::cos(half) * std::cos(half);
    const double arg = (plus ? (pi + beta) : (pi - beta)) / (2.0 * n);
    return (std::cos(arg) / std::sin(arg)) * transition_function(kL * a);
}

} // namespace detail

/// Kouyoumjian-Pathak uniform coefficients of a perfectly conducting wedge (spherical-wave distance parameter).
inline DiffractionCoefficients utd_coefficients(const WedgeGeometry &g, double k)
{
    if (!(k > 0.0) || !(g.s_i > 0.0) || !(g.s_d > 0.0))
        throw std::invalid_argument("utd_coefficients: k, s_i and s_d must be positive");
    if (!(g.beta0 > 0.0 && g.beta0 < std::numbers::pi))
        throw std::invalid_argument("utd_coefficients: beta0 must lie in (0, pi)");
    const double n = g.n_wedge;
    const double sin_b = std::sin(g.beta0);
    const double big_l = g.s_i * g.s_d / (g.s_i + g.s_d) * sin_b * sin_b;
    const double kL = k * big_l;
    const std::complex<double> pre = -std::exp(std::complex<double>(0.0, -std::numbers::pi / 4.0)) /
                                     (2.0 * n * std::sqrt(2.0 * std::numbers::pi * k) * sin_b);
    const double dm = g.phi - g.phi_prime;
    const double dp = g.phi + g.phi_prime;
    const std::complex<double> incident =
        detail::cot_transition(dm, true, n, kL) + detail::cot_transition(dm, false, n, kL);
    const std::complex<double> reflected =
        detail::cot_transition(dp, true, n, kL) + detail::cot_transition(dp, false, n, kL);
    return {pre * (incident - reflected), pre * (incident + reflected)};
}

/// sqrt(s_i / (s_d (s_i + s_d)))
inline double diffracted_spreading(double s_i, double s_d)
{
    if (!(s_i > 0.0) || !(s_d > 0.0))
        throw std::invalid_argument("diffracted_spreading: leg lengths must be positive");
    return std::sqrt(s_i / (s_d * (s_i + s_d)));
}

/// Azimuth in [0, 2pi) of a direction leaving the edge, measured from the o-face.
inline double wedge_azimuth(const EdgeSpec &edge, const Vec3 &dir_from_edge)
{
    const Vec3 e = edge.direction();
    const Vec3 v = dir_from_edge - e * dot(dir_from_edge, e);
    const Vec3 t_o = -edge.n2;
    double phi = std::atan2(dot(v, edge.n1), dot(v, t_o));
    if (phi < 0.0)
        phi += 2.0 * std::numbers::pi;
    return phi;
}

} // namespace uwbrt

#endif
