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

#ifndef UWBRT_MATERIALS_HPP
#define UWBRT_MATERIALS_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace uwbrt
{

inline constexpr double kVacuumPermittivity = 8.8541878128e-12; // F/m
inline constexpr double kSpeedOfLight = 299792458.0;            // m/s

// Smallest cosine of the incidence angle handed to fresnel(); SBR can produce near-grazing hits.
inline constexpr double kGrazingCosClamp = 1e-6;

enum class MaterialKind
{
    Pec,
    Dielectric
};

struct Material
{
    MaterialKind kind = MaterialKind::Pec;
    double eps_r = 1.0;
    double sigma = 0.0; // S/m

    static Material pec() { return {}; }
    static Material dielectric(double eps_r, double sigma)
    {
        if (!(eps_r >= 1.0) || !(sigma >= 0.0))
            throw std::invalid_argument("Material: need eps_r >= 1 and sigma >= 0");
        return {MaterialKind::Dielectric, eps_r, sigma};
    }
    // Warehouse floor slab: eps_r = 7, sigma = 0.015 S/m
    static Material concrete() { return dielectric(7.0, 0.015); }

    bool operator==(const Material &) const = default;
};

// Reflection coefficients in the (e_perp, e_par) basis used by reflect_field(); Gamma_par = +1
// for a perfect conductor so that tangential E cancels at the surface.
struct FresnelPair
{
    std::complex<double> gamma_perp;
    std::complex<double> gamma_par;
};

/// eps_r - j sigma / (2 pi f eps0)
inline std::complex<double> complex_permittivity(const Material &m, double frequency_hz)
{
    if (m.kind == MaterialKind::Pec)
        throw std::domain_error("complex_permittivity: a perfect conductor has no finite permittivity");
    if (!(frequency_hz > 0.0))
        throw std::domain_error("complex_permittivity: frequency must be positive");
    const double omega = 2.0 * std::numbers::pi * frequency_hz;
    return {m.eps_r, -m.sigma / (omega * kVacuumPermittivity)};
}

/// Half-space reflection coefficients; cos_theta_i measured from the surface normal.
inline FresnelPair fresnel(const Material &m, double cos_theta_i, double frequency_hz)
{
    if (!(cos_theta_i > 0.0))
        throw std::domain_error("fresnel: grazing or back-side incidence (cos_theta_i <= 0)");
    if (cos_theta_i > 1.0)
        cos_theta_i = 1.0;
    if (m.kind == MaterialKind::Pec)
        return {-1.0, 1.0};
    const std::complex<double> eps = complex_permittivity(m, frequency_hz);
    const double sin2 = 1.0 - cos_theta_i * cos_theta_i;
    const std::complex<double> root = std::sqrt(eps - sin2);
    const std::complex<double> perp = (cos_theta_i - root) / (cos_theta_i + root);
    const std::complex<double> par = (eps * cos_theta_i - root) / (eps * cos_theta_i + root);
    return {perp, par};
}

} // namespace uwbrt

#endif
