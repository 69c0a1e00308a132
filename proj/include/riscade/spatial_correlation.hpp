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
#include "riscade/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <iostream>
#include <span>
#include <vector>

namespace riscade
{

// Carrier and medium parameters shared by the correlation builders and the
// channel synthesizers.
struct PropagationParams
{
    double center_frequency = 0.0;       // f_c, Hz
    double absorption_coefficient = 0.0; // K_a, 1/m, molecular absorption
    double total_power = 1.0;            // Omega; per-ring power is eps_l * Omega

    double wavelength() const { return speed_of_light / center_frequency; }

    void validate() const
    {
        if (!(center_frequency > 0.0))
            throw validation_error("PropagationParams: center frequency must be positive");
        if (absorption_coefficient < 0.0)
            throw validation_error("PropagationParams: absorption coefficient must be nonnegative");
        if (!(total_power > 0.0))
            throw validation_error("PropagationParams: total power must be positive");
    }
};

enum class FieldType
{
    near,
    far
};

// Which absorption exponent the far-field builder uses. The closed far-field
// display carries a (q+p)-proportional absorption exponent that bends the
// diagonal away from Omega; the alternative keeps the exact ring distances in
// the absorption factor and only linearizes the phase.
enum class FarfieldAbsorption
{
    final_display,
    eq14
};

struct CorrelationMatrix
{
    Eigen::MatrixXcd entries;
    FieldType field_type = FieldType::near;
    bool coupling_adjusted = false;
    int quad_points = 0;
    // Relative Frobenius norm removed when a coupling-adjusted matrix had to
    // be re-Hermitized; 0 for plain builder output.
    double hermitize_residual = 0.0;
    // Relative Frobenius norm of the negative-eigenvalue part clipped when
    // projecting a coupling-adjusted matrix back onto the PSD cone.
    double psd_clip_residual = 0.0;
    // Set when the far-field absorption exponent moved some diagonal entry
    // away from Omega by more than 1%.
    bool diagonal_deviation_warning = false;

    Eigen::Index size() const { return entries.rows(); }
};

// Von Mises angular density e^{kappa cos(theta-mu)} / (2 pi I0(kappa)).
inline double von_mises_pdf(double theta, double mu, double kappa)
{
    if (kappa < 0.0)
        throw std::domain_error("von_mises_pdf: kappa must be nonnegative");
    if (kappa < 700.0)
        return std::exp(kappa * std::cos(theta - mu)) / (2.0 * pi * std::cyl_bessel_i(0.0, kappa));
    // Large kappa: I0 overflows, use the scaled asymptotic expansion
    // I0(k) = e^k / sqrt(2 pi k) (1 + 1/(8k) + 9/(128 k^2) + ...).
    const double i0e = (1.0 + 1.0 / (8.0 * kappa) + 9.0 / (128.0 * kappa * kappa) +
                        225.0 / (3072.0 * kappa * kappa * kappa)) /
                       std::sqrt(2.0 * pi * kappa);
    return std::exp(kappa * (std::cos(theta - mu) - 1.0)) / (2.0 * pi * i0e);
}

namespace detail
{

// Periodic composite-trapezoid grid over [-pi, pi); for smooth periodic
// integrands this converges spectrally. Integration returns both the
// N-point and the embedded N/2-point value so grid refinement can be
// checked without re-evaluating the integrand.
struct PeriodicGrid
{
    int points;
    double step;
    std::vector<double> theta;

    explicit PeriodicGrid(int n) : points(n), step(2.0 * pi / n), theta(static_cast<std::size_t>(n))
    {
        for (int i = 0; i < n; ++i)
            theta[static_cast<std::size_t>(i)] = -pi + i * step;
    }
};

inline void check_entry_convergence(std::complex<double> fine, std::complex<double> coarse,
                                    double scale)
{
    const double denom = std::max(std::abs(fine), 1e-9 * scale);
    if (std::abs(fine - coarse) > 1e-6 * denom)
        throw numerical_error("correlation builder: quadrature did not converge "
                              "(doubling the grid still moves an entry by more than 1e-6 relative); "
                              "increase quad_points");
}

} // namespace detail

// Near-field spatial correlation.
//
// Entry (q, p), with q and p signed element indices:
//   R(q,p) = Omega sum_l eps_l int_{-pi}^{pi}
//              d0^2 / (d_q d_p)
//            * exp(-j 2 pi / lambda (d_q - d_p))
//            * exp(-K_a/2 (d_q + d_p - 2 d0))
//            * p_l(theta) d theta,
// where d0 = d_{q=0}(theta) is the reference-element distance. The
// absorption exponent uses the excess path length d_q + d_p - 2 d0, the form
// the elementwise channel model integrates to.
inline CorrelationMatrix build_nearfield_correlation(const UlaGeometry &geom,
                                                     std::span<const ClusterRing> rings,
                                                     const PropagationParams &prop,
                                                     int quad_points = 2048)
{
    geom.validate();
    prop.validate();
    validate_rings(rings, /*require_origin_free=*/true);
    if (quad_points < 64)
        throw validation_error("build_nearfield_correlation: quad_points must be at least 64");

    const int n = geom.element_count;
    const double wavenumber = 2.0 * pi / prop.wavelength();
    const double ka = prop.absorption_coefficient;
    const detail::PeriodicGrid grid(quad_points);

    CorrelationMatrix out;
    out.entries.setZero(n, n);
    out.field_type = FieldType::near;
    out.quad_points = quad_points;

    // Per-ring distance tables: d(elem, theta) plus the reference distance.
    std::vector<double> dist(static_cast<std::size_t>(n) * grid.theta.size());
    std::vector<double> dref(grid.theta.size());
    std::vector<double> pdf(grid.theta.size());

    for (const auto &ring : rings)
    {
        for (std::size_t t = 0; t < grid.theta.size(); ++t)
        {
            const double theta = grid.theta[t];
            dref[t] = ring_scatterer_distance(ring, theta, 0, geom.spacing);
            pdf[t] = von_mises_pdf(theta, ring.vm_mean, ring.vm_concentration);
            for (int i = 0; i < n; ++i)
                dist[static_cast<std::size_t>(i) * grid.theta.size() + t] =
                    ring_scatterer_distance(ring, theta, geom.index_of(i), geom.spacing);
        }
        const double ring_power = prop.total_power * ring.power_fraction;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j)
            {
                const double *dq = &dist[static_cast<std::size_t>(i) * grid.theta.size()];
                const double *dp = &dist[static_cast<std::size_t>(j) * grid.theta.size()];
                std::complex<double> fine(0.0, 0.0), coarse(0.0, 0.0);
                for (std::size_t t = 0; t < grid.theta.size(); ++t)
                {
                    const double amp = (dref[t] * dref[t]) / (dq[t] * dp[t]) *
                                       std::exp(-0.5 * ka * (dq[t] + dp[t] - 2.0 * dref[t])) * pdf[t];
                    const std::complex<double> term =
                        amp * std::polar(1.0, -wavenumber * (dq[t] - dp[t]));
                    fine += term;
                    if (t % 2 == 0)
                        coarse += term;
                }
                fine *= grid.step * ring_power;
                coarse *= 2.0 * grid.step * ring_power;
                detail::check_entry_convergence(fine, coarse, prop.total_power);
                out.entries(i, j) += fine;
            }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            out.entries(j, i) = std::conj(out.entries(i, j));
    return out;
}

// Far-field spatial correlation.
//
// Planar-wavefront limit of the near-field kernel. First-order in the
// element offsets, d_q - d_p -> -(q-p) delta (D sin(phi) + r sin(theta)) /
// d0(theta) with d0(theta) = sqrt(D^2 + r^2 + 2 D r cos(phi - theta)), so
// entry (q, p) of the closed display is
//   R(q,p) = Omega sum_l eps_l int exp[ (j 2 pi / lambda (q-p)
//            + K_a/2 (q+p)) delta (D sin(phi) + r sin(theta)) / d0(theta) ]
//            p_l(theta) d theta.
// The phase sign is fixed by the far/near consistency requirement: it is the
// limit of exp(-j 2 pi / lambda (d_q - d_p)), the conjugate of the sign a
// literal reading of the closed display would give. The (q+p) absorption
// exponent is kept as written (it is the first-order expansion of the
// excess-path absorption); when it moves a diagonal entry away from Omega by
// more than 1% the result carries a warning flag. The eq14 variant keeps the
// exact ring distances inside the excess-path absorption factor and only
// linearizes the phase.
inline CorrelationMatrix build_farfield_correlation(const UlaGeometry &geom,
                                                    std::span<const ClusterRing> rings,
                                                    const PropagationParams &prop,
                                                    int quad_points = 2048,
                                                    FarfieldAbsorption absorption =
                                                        FarfieldAbsorption::final_display)
{
    geom.validate();
    prop.validate();
    validate_rings(rings, /*require_origin_free=*/false);
    if (quad_points < 64)
        throw validation_error("build_farfield_correlation: quad_points must be at least 64");

    const int n = geom.element_count;
    const double wavenumber = 2.0 * pi / prop.wavelength();
    const double ka = prop.absorption_coefficient;
    const detail::PeriodicGrid grid(quad_points);

    CorrelationMatrix out;
    out.entries.setZero(n, n);
    out.field_type = FieldType::far;
    out.quad_points = quad_points;

    std::vector<double> ratio(grid.theta.size()); // (D sin phi + r sin theta) / d0
    std::vector<double> pdf(grid.theta.size());
    std::vector<double> dist; // exact distances, eq14 variant only
    std::vector<double> dref;
    if (absorption == FarfieldAbsorption::eq14)
    {
        dist.resize(static_cast<std::size_t>(n) * grid.theta.size());
        dref.resize(grid.theta.size());
    }

    for (const auto &ring : rings)
    {
        for (std::size_t t = 0; t < grid.theta.size(); ++t)
        {
            const double theta = grid.theta[t];
            const double d0 = std::sqrt(ring.center_distance * ring.center_distance +
                                        ring.radius * ring.radius +
                                        2.0 * ring.center_distance * ring.radius *
                                            std::cos(ring.center_angle - theta));
            const double lateral = ring.center_distance * std::sin(ring.center_angle) +
                                   ring.radius * std::sin(theta);
            ratio[t] = lateral / d0;
            pdf[t] = von_mises_pdf(theta, ring.vm_mean, ring.vm_concentration);
            if (absorption == FarfieldAbsorption::eq14)
            {
                dref[t] = d0;
                for (int i = 0; i < n; ++i)
                    dist[static_cast<std::size_t>(i) * grid.theta.size() + t] =
                        ring_scatterer_distance(ring, theta, geom.index_of(i), geom.spacing);
            }
        }
        const double ring_power = prop.total_power * ring.power_fraction;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j)
            {
                const int q = geom.index_of(i);
                const int p = geom.index_of(j);
                const double phase_factor = wavenumber * (q - p) * geom.spacing;
                std::complex<double> fine(0.0, 0.0), coarse(0.0, 0.0);
                if (absorption == FarfieldAbsorption::final_display)
                {
                    const double absorb_factor = 0.5 * ka * (q + p) * geom.spacing;
                    for (std::size_t t = 0; t < grid.theta.size(); ++t)
                    {
                        const std::complex<double> term =
                            std::exp(std::complex<double>(absorb_factor * ratio[t],
                                                          phase_factor * ratio[t])) *
                            pdf[t];
                        fine += term;
                        if (t % 2 == 0)
                            coarse += term;
                    }
                }
                else
                {
                    const double *dq = &dist[static_cast<std::size_t>(i) * grid.theta.size()];
                    const double *dp = &dist[static_cast<std::size_t>(j) * grid.theta.size()];
                    for (std::size_t t = 0; t < grid.theta.size(); ++t)
                    {
                        const double amp =
                            std::exp(-0.5 * ka * (dq[t] + dp[t] - 2.0 * dref[t])) * pdf[t];
                        const std::complex<double> term =
                            amp * std::polar(1.0, phase_factor * ratio[t]);
                        fine += term;
                        if (t % 2 == 0)
                            coarse += term;
                    }
                }
                fine *= grid.step * ring_power;
                coarse *= 2.0 * grid.step * ring_power;
                detail::check_entry_convergence(fine, coarse, prop.total_power);
                out.entries(i, j) += fine;
            }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            out.entries(j, i) = std::conj(out.entries(i, j));

    if (absorption == FarfieldAbsorption::final_display && ka > 0.0)
    {
        double max_dev = 0.0;
        for (int i = 0; i < n; ++i)
            max_dev = std::max(max_dev,
                               std::abs(out.entries(i, i).real() - prop.total_power) /
                                   prop.total_power);
        if (max_dev > 0.01)
        {
            out.diagonal_deviation_warning = true;
            std::cerr << "warning: far-field absorption exponent moved the correlation diagonal "
                      << "away from Omega by " << max_dev * 100.0
                      << "% (element-index-dependent (q+p) term); "
                      << "consider farfield_absorption = eq14\n";
        }
    }
    return out;
}

// Hermitian PSD square root via eigendecomposition. Eigenvalues in
// [-1e-9 lambda_max, 0) are treated as quadrature noise and clamped to zero;
// anything below that signals a correlation-builder bug and throws.
inline Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd &r)
{
    if (r.rows() != r.cols())
        throw validation_error("hermitian_sqrt: matrix must be square");
    const double scale = r.norm();
    if (scale > 0.0 && (r - r.adjoint()).norm() > 1e-9 * scale)
        throw numerical_error("hermitian_sqrt: input is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r);
    if (eig.info() != Eigen::Success)
        throw numerical_error("hermitian_sqrt: eigendecomposition failed");

    Eigen::VectorXd lambda = eig.eigenvalues();
    const double lmax = lambda.maxCoeff();
    const double clamp_floor = -1e-9 * std::max(lmax, 0.0);
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
    {
        if (lambda(i) < clamp_floor)
            throw numerical_error("hermitian_sqrt: matrix is not PSD (eigenvalue " +
                                  std::to_string(lambda(i)) + " below clamp threshold)");
        if (lambda(i) < 0.0)
            lambda(i) = 0.0;
    }
    Eigen::MatrixXcd s = eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
                         eig.eigenvectors().adjoint();

    const Eigen::MatrixXcd clamped = eig.eigenvectors() * lambda.asDiagonal() *
                                     eig.eigenvectors().adjoint();
    const double cnorm = clamped.norm();
    if (cnorm > 0.0 && (s * s - clamped).norm() > 1e-10 * cnorm)
        throw numerical_error("hermitian_sqrt: reconstruction error exceeds 1e-10");
    return s;
}

} // namespace riscade
