// SPDX-License-Identifier: Apache-2.0
//
// riscade: correlated mixture-gamma channel synthesis and linear estimation
// for RIS-aided THz uplinks
// Copyright (C) 2026 the riscade authors
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

#pragma once

#include "riscade/common.hpp"
#include "riscade/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <vector>

namespace riscade
{

// ------------------------------------------------------------------------
// Array, user and scatterer-ring geometry. Everything lives in the X-Y
// plane; Z components are carried as zero for forward compatibility.
// ------------------------------------------------------------------------

// Uniform linear array along the Y-axis. Element k sits at [0, k delta, 0]
// with k in -ceil((N-1)/2) .. floor((N-1)/2); for even N the range is
// asymmetric (e.g. N = 4 gives k in -2..1).
struct UlaGeometry
{
    int element_count = 0;
    double spacing = 0.0; // meters

    void validate() const
    {
        if (element_count < 1)
            throw validation_error("UlaGeometry: element count must be positive");
        if (!(spacing > 0.0))
            throw validation_error("UlaGeometry: element spacing must be positive");
    }

    int index_min() const { return -(element_count / 2); }
    int index_max() const { return (element_count - 1) / 2; }
    // Signed element index for matrix row/column i in 0 .. N-1.
    int index_of(int i) const { return index_min() + i; }

    Eigen::Vector3d position(int k) const { return {0.0, k * spacing, 0.0}; }
};

// User location at distance L from the origin, angle measured from the
// positive X-axis: position = L [cos(theta), sin(theta), 0].
struct UePlacement
{
    double distance = 0.0; // meters
    double angle = 0.0;    // radians in [-pi/2, pi/2]

    void validate() const
    {
        if (!(distance > 0.0))
            throw validation_error("UePlacement: distance must be positive");
        if (angle < -pi / 2.0 || angle > pi / 2.0)
            throw validation_error("UePlacement: angle must lie in [-pi/2, pi/2]");
    }

    Eigen::Vector3d position() const
    {
        return {distance * std::cos(angle), distance * std::sin(angle), 0.0};
    }
};

// One scatterer cluster: a ring of radius r centered at distance D, angle
// phi from the array origin. Scatterer angular positions on the ring follow
// a von Mises law with mean mu and concentration kappa; the cluster carries
// power fraction eps of the total.
struct ClusterRing
{
    double center_distance = 0.0;   // D_l, meters
    double center_angle = 0.0;      // phi_l, radians in [-pi/2, pi/2)
    double radius = 0.0;            // r_l, meters
    double power_fraction = 0.0;    // eps_l
    double vm_mean = 0.0;           // mu_l
    double vm_concentration = 0.0;  // kappa_l >= 0
    int scatterer_count = 0;        // N_l

    Eigen::Vector2d scatterer_position(double theta) const
    {
        return {center_distance * std::cos(center_angle) + radius * std::cos(theta),
                center_distance * std::sin(center_angle) + radius * std::sin(theta)};
    }
};

// Validates a ring set. The near-field machinery additionally requires
// r_l < D_l (the ring must not enclose the array origin); the far-field
// integrals stay finite for D_l = 0 and only need r_l != D_l, which the
// Clarke isotropic limit relies on.
inline void validate_rings(std::span<const ClusterRing> rings, bool require_origin_free = true)
{
    if (rings.empty())
        throw validation_error("rings: at least one cluster ring required");
    double esum = 0.0;
    for (const auto &r : rings)
    {
        if (!(r.power_fraction > 0.0))
            throw validation_error("rings: power fractions eps must be positive");
        if (!(r.radius > 0.0) && r.radius != 0.0)
            throw validation_error("rings: ring radius must be nonnegative");
        if (r.center_distance < 0.0)
            throw validation_error("rings: ring center distance must be nonnegative");
        if (r.vm_concentration < 0.0)
            throw validation_error("rings: von Mises concentration kappa must be nonnegative");
        if (r.center_angle < -pi / 2.0 || r.center_angle >= pi / 2.0)
            throw validation_error("rings: ring center angle phi must lie in [-pi/2, pi/2)");
        if (r.scatterer_count < 1)
            throw validation_error("rings: scatterer count must be positive");
        if (require_origin_free && !(r.radius < r.center_distance))
            throw validation_error("rings: ring radius must be smaller than its center distance");
        if (!require_origin_free && r.radius == r.center_distance && r.radius > 0.0)
            throw validation_error("rings: ring may not pass through the array origin");
        esum += r.power_fraction;
    }
    if (std::abs(esum - 1.0) > 1e-12)
        throw validation_error("rings: power fractions eps must sum to 1 within 1e-12 (got " +
                               std::to_string(esum) + ")");
}

// Distance from the ring scatterer at angle theta to array element q:
//   d_q(theta) = sqrt((D cos(phi) + r cos(theta))^2
//              + (D sin(phi) + r sin(theta) - q delta)^2)
inline double ring_scatterer_distance(const ClusterRing &ring, double theta, int q, double spacing)
{
    const double x = ring.center_distance * std::cos(ring.center_angle) + ring.radius * std::cos(theta);
    const double y = ring.center_distance * std::sin(ring.center_angle) + ring.radius * std::sin(theta) -
                     q * spacing;
    return std::hypot(x, y);
}

// Two-term far-field expansion of d_q(theta) + d_p(theta):
//   2 sqrt(D^2 + r^2 + 2 D r cos(phi - theta))
//   - (q - p) delta (D sin(phi) + r sin(theta)) / sqrt(...)
// The correction term is antisymmetric under a q <-> p swap.
inline double farfield_distance_sum(const ClusterRing &ring, double theta, int q, int p, double spacing)
{
    const double d0 = std::sqrt(ring.center_distance * ring.center_distance +
                                ring.radius * ring.radius +
                                2.0 * ring.center_distance * ring.radius *
                                    std::cos(ring.center_angle - theta));
    const double lateral = ring.center_distance * std::sin(ring.center_angle) +
                           ring.radius * std::sin(theta);
    return 2.0 * d0 - (q - p) * spacing * lateral / d0;
}

// ------------------------------------------------------------------------
// Scatterer draws
// ------------------------------------------------------------------------

struct ScattererDraw
{
    double angle = 0.0;      // theta on the ring, von Mises distributed
    double phase = 0.0;      // psi, iid uniform on [-pi, pi)
    double magnitude = 0.0;  // h-tilde, from the configured fading law
    double reflection = 1.0; // reflection coefficient magnitude in (0, 1]
};

// Exact von Mises sampler (Best-Fisher rejection scheme). kappa = 0 falls
// back to the uniform circle.
inline double sample_von_mises(double mu, double kappa, RngStream &rng)
{
    if (kappa < 0.0)
        throw std::domain_error("sample_von_mises: kappa must be nonnegative");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (kappa < 1e-10)
        return wrap_angle(-pi + 2.0 * pi * unif(rng));

    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
    const double rr = (1.0 + rho * rho) / (2.0 * rho);

    double f = 0.0;
    for (;;)
    {
        const double u1 = unif(rng);
        const double u2 = unif(rng);
        const double z = std::cos(pi * u1);
        f = (1.0 + rr * z) / (rr + z);
        const double c = kappa * (rr - f);
        if (c * (2.0 - c) - u2 > 0.0)
            break;
        if (std::log(c / u2) + 1.0 - c >= 0.0)
            break;
    }
    const double sign = unif(rng) < 0.5 ? -1.0 : 1.0;
    return wrap_angle(mu + sign * std::acos(f));
}

// Draws the ring's scatterer set: angles from von Mises(mu, kappa), path
// phases iid uniform on [-pi, pi), magnitudes from the supplied sampler
// (the fading law, already normalized by the channel-synthesis policy).
template <class MagnitudeSampler>
std::vector<ScattererDraw> draw_scatterers(const ClusterRing &ring, MagnitudeSampler &&magnitude,
                                           RngStream &rng, double reflection = 1.0)
{
    if (ring.scatterer_count < 1)
        throw validation_error("draw_scatterers: scatterer count must be positive");
    if (!(reflection > 0.0) || reflection > 1.0)
        throw validation_error("draw_scatterers: reflection magnitude must lie in (0, 1]");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<ScattererDraw> draws(static_cast<std::size_t>(ring.scatterer_count));
    for (auto &d : draws)
    {
        d.angle = sample_von_mises(ring.vm_mean, ring.vm_concentration, rng);
        d.phase = -pi + 2.0 * pi * unif(rng);
        d.magnitude = magnitude(rng);
        d.reflection = reflection;
    }
    return draws;
}

} // namespace riscade
