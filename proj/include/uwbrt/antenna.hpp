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

#ifndef UWBRT_ANTENNA_HPP
#define UWBRT_ANTENNA_HPP

#include "geometry.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace uwbrt
{

enum class Polarization
{
    Vertical,               // dipole axis along z
    HorizontalLongitudinal, // dipole axis along the long warehouse dimension (x)
    HorizontalTransverse    // dipole axis along the transverse dimension (y)
};

inline Vec3 polarization_axis(Polarization p)
{
    switch (p)
    {
    case Polarization::Vertical:
        return {0.0, 0.0, 1.0};
    case Polarization::HorizontalLongitudinal:
        return {1.0, 0.0, 0.0};
    case Polarization::HorizontalTransverse:
        return {0.0, 1.0, 0.0};
    }
    throw std::invalid_argument("polarization_axis: unknown polarization");
}

inline std::string_view to_string(Polarization p)
{
    switch (p)
    {
    case Polarization::Vertical:
        return "vertical";
    case Polarization::HorizontalLongitudinal:
        return "horizontal-longitudinal";
    case Polarization::HorizontalTransverse:
        return "horizontal-transverse";
    }
    return "?";
}

inline std::optional<Polarization> polarization_from_string(std::string_view s)
{
    if (s == "vertical")
        return Polarization::Vertical;
    if (s == "horizontal-longitudinal")
        return Polarization::HorizontalLongitudinal;
    if (s == "horizontal-transverse")
        return Polarization::HorizontalTransverse;
    return std::nullopt;
}

/// Exponent n of the sin^n pattern whose E-plane half-power beamwidth is hpbw_deg.
inline double pattern_exponent_for_hpbw(double hpbw_deg)
{
    if (!(hpbw_deg > 0.0 && hpbw_deg < 180.0))
        throw std::invalid_argument("pattern_exponent_for_hpbw: beamwidth must be in (0, 180) degrees");
    const double psi_half = (90.0 - 0.5 * hpbw_deg) * std::numbers::pi / 180.0;
    return std::log(0.5) / std::log(std::sin(psi_half));
}

inline const double kDefaultPatternExponent = pattern_exponent_for_hpbw(60.0);
inline constexpr double kDefaultGainMaxDbi = 3.0;

struct AntennaSpec
{
    Vec3 position;
    Vec3 axis{0.0, 0.0, 1.0};
    double gain_max_dbi = kDefaultGainMaxDbi;
    double pattern_exponent = kDefaultPatternExponent;

    double gain_max_linear() const { return std::pow(10.0, gain_max_dbi / 10.0); }
};

inline AntennaSpec make_antenna(const Vec3 &position, Polarization pol, double gain_max_dbi = kDefaultGainMaxDbi,
                                double pattern_exponent = kDefaultPatternExponent)
{
    return {position, polarization_axis(pol), gain_max_dbi, pattern_exponent};
}

/// Linear gain G0 sin(psi)^n, psi measured from the dipole axis.
inline double pattern_gain(const AntennaSpec &a, const Vec3 &dir)
{
    const double s = std::min(1.0, norm(cross(a.axis, dir)));
    return a.gain_max_linear() * std::pow(s, a.pattern_exponent);
}

/// Far-field E direction (theta-hat with the axis as polar axis); empty within 1e-6 rad of the axis.
inline std::optional<Vec3> polarization_vector(const AntennaSpec &a, const Vec3 &dir)
{
    const Vec3 v = a.axis - dir * dot(a.axis, dir);
    const double s = norm(v);
    if (s < std::sin(1e-6))
        return std::nullopt;
    return -(v / s);
}

/// sqrt(G(-dir)) (E . p(-dir)) for a wave arriving along dir.
inline std::complex<double> effective_receive_projection(const AntennaSpec &a, const Vec3 &dir, const CVec3 &e)
{
    const Vec3 back = -dir;
    const auto pol = polarization_vector(a, back);
    if (!pol)
        return {0.0, 0.0};
    return std::sqrt(pattern_gain(a, back)) * dot(e, *pol);
}

/// (1/4pi) of the pattern integrated over the sphere, midpoint rule in psi.
inline double pattern_mean_gain(double gain_max_linear, double pattern_exponent, int samples = 20000)
{
    double acc = 0.0;
    const double h = std::numbers::pi / samples;
    for (int i = 0; i < samples; ++i)
    {
        const double s = std::sin((i + 0.5) * h);
        acc += std::pow(s, pattern_exponent + 1.0);
    }
    return gain_max_linear * 0.5 * acc * h;
}

/// Largest max gain (dBi) not exceeding the requested one for which the pattern radiates no more than it is fed.
inline double consistent_gain_max_dbi(double gain_max_dbi, double pattern_exponent)
{
    const double g0 = std::pow(10.0, gain_max_dbi / 10.0);
    const double mean = pattern_mean_gain(g0, pattern_exponent);
    if (mean <= 1.0)
        return gain_max_dbi;
    return 10.0 * std::log10(g0 / mean);
}

} // namespace uwbrt

#endif
