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
#include "riscade/spatial_correlation.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>

namespace riscade
{

// ------------------------------------------------------------------------
// Sine and cosine integrals
//
//   Si(x) = int_0^x sin(t)/t dt
//   Ci(x) = gamma + ln(x) + int_0^x (cos(t) - 1)/t dt
//
// Power series below x = 4; above that the pair is evaluated through the
// complex exponential integral E1(ix) = -Ci(x) + i (Si(x) - pi/2) with a
// modified-Lentz continued fraction. Absolute error stays below 1e-10 on
// [1e-6, 1e4].
// ------------------------------------------------------------------------

struct SiCi
{
    double si;
    double ci;
};

namespace detail
{

inline SiCi sici_series(double x)
{
    // sum_k (-1)^k x^(2k+1) / ((2k+1)(2k+1)!)  and  gamma + ln x +
    // sum_k (-1)^k x^(2k) / ((2k)(2k)!)
    double si = x, ci = 0.0;
    double term_even = 1.0; // x^(2k)/(2k)!
    for (int k = 1; k <= 60; ++k)
    {
        term_even *= -x * x / ((2.0 * k - 1.0) * (2.0 * k));
        ci += term_even / (2.0 * k);
        const double term_si_k = term_even * x / ((2.0 * k + 1.0) * (2.0 * k + 1.0));
        si += term_si_k;
        if (std::abs(term_si_k) < 1e-18 && std::abs(term_even) < 1e-18)
            break;
    }
    return {si, euler_gamma + std::log(x) + ci};
}

inline SiCi sici_continued_fraction(double x)
{
    // E1(z), z = ix, via the continued fraction
    // E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...))).
    const std::complex<double> z(0.0, x);
    const double tiny = 1e-290;
    std::complex<double> b = z + 1.0;
    std::complex<double> c(1.0 / tiny, 0.0);
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    for (int i = 1; i <= 2000; ++i)
    {
        const double a = -static_cast<double>(i) * static_cast<double>(i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const std::complex<double> del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16)
        {
            h *= std::polar(1.0, -x); // e^{-ix}
            return {pi / 2.0 + h.imag(), -h.real()};
        }
    }
    throw numerical_error("sine_cosine_integrals: continued fraction did not converge");
}

inline SiCi sici_impl(double x)
{
    return x <= 4.0 ? sici_series(x) : sici_continued_fraction(x);
}

} // namespace detail

inline double sine_integral(double x)
{
    if (x < 0.0)
        throw std::domain_error("sine_integral: x must be nonnegative");
    if (x == 0.0)
        return 0.0;
    return detail::sici_impl(x).si;
}

inline double cosine_integral(double x)
{
    if (x <= 0.0)
        throw std::domain_error("cosine_integral: x must be positive");
    return detail::sici_impl(x).ci;
}

inline SiCi sine_cosine_integrals(double x)
{
    if (x <= 0.0)
        throw std::domain_error("sine_cosine_integrals: x must be positive");
    return detail::sici_impl(x);
}

// ------------------------------------------------------------------------
// Dipole mutual impedance and the coupling matrix
// ------------------------------------------------------------------------

// Mutual impedance of two parallel side-by-side dipoles of length l at
// separation d (sinusoidal current, referred to the current maxima):
//   R21 = eta/(4 pi) [2 Ci(u0) - Ci(u1) - Ci(u2)]
//   X21 = -eta/(4 pi) [2 Si(u0) - Si(u1) - Si(u2)]
// with u0 = k d, u1 = k (sqrt(d^2 + l^2) + l), u2 = k (sqrt(d^2 + l^2) - l).
inline std::complex<double> mutual_impedance_sidebyside(double dipole_length, double separation,
                                                        double wavelength)
{
    if (!(separation > 0.0))
        throw validation_error("mutual_impedance_sidebyside: separation must be positive");
    if (!(dipole_length > 0.0))
        throw validation_error("mutual_impedance_sidebyside: dipole length must be positive");
    if (!(wavelength > 0.0))
        throw validation_error("mutual_impedance_sidebyside: wavelength must be positive");

    const double k = 2.0 * pi / wavelength;
    const double diag = std::sqrt(separation * separation + dipole_length * dipole_length);
    const double u0 = k * separation;
    const double u1 = k * (diag + dipole_length);
    const double u2 = k * (diag - dipole_length);

    const SiCi s0 = sine_cosine_integrals(u0);
    const SiCi s1 = sine_cosine_integrals(u1);
    const SiCi s2 = sine_cosine_integrals(u2);
    const double scale = free_space_impedance / (4.0 * pi);
    return {scale * (2.0 * s0.ci - s1.ci - s2.ci), -scale * (2.0 * s0.si - s1.si - s2.si)};
}

// Self impedance of the half-wavelength dipole. The standard value; the real
// part equals eta/(4 pi) (gamma + ln(2 pi) - Ci(2 pi)) from the same
// closed-form machinery within 0.1%, the reactance is the commonly used
// reference number for the ideal thin dipole.
inline std::complex<double> halfwave_self_impedance() { return {73.08, 42.21}; }

struct CouplingParams
{
    double dipole_length = 0.0;          // meters, lambda/2 by default in configs
    double dissipation_resistance = 2.0; // r_d, ohms
    double spacing = 0.0;                // element separation delta, meters
    int element_count = 0;

    void validate() const
    {
        if (!(dipole_length > 0.0))
            throw validation_error("CouplingParams: dipole length must be positive");
        if (!(dissipation_resistance > 0.0))
            throw validation_error("CouplingParams: dissipation resistance must be positive");
        if (!(spacing > 0.0))
            throw validation_error("CouplingParams: element spacing must be positive");
        if (element_count < 1)
            throw validation_error("CouplingParams: element count must be positive");
    }
};

using ImpedanceMatrix = Eigen::MatrixXcd;

// Mutual impedance matrix of the uniform line array: self impedance on the
// diagonal, side-by-side mutual impedance at separation |q-p| delta off it.
// Symmetric Toeplitz by construction.
inline ImpedanceMatrix build_impedance_matrix(const CouplingParams &params, double wavelength)
{
    params.validate();
    const int n = params.element_count;
    std::vector<std::complex<double>> row(static_cast<std::size_t>(n));
    row[0] = halfwave_self_impedance();
    for (int s = 1; s < n; ++s)
        row[static_cast<std::size_t>(s)] =
            mutual_impedance_sidebyside(params.dipole_length, s * params.spacing, wavelength);

    ImpedanceMatrix z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            z(i, j) = row[static_cast<std::size_t>(std::abs(i - j))];
    return z;
}

// M = (Z + r_d I)^{-1}. Invertibility is checked through a 1-norm condition
// estimate; anything above 1e12 is reported as near-singular.
inline Eigen::MatrixXcd coupling_matrix_from_impedance(const Eigen::MatrixXcd &z, double r_d)
{
    if (z.rows() != z.cols())
        throw validation_error("coupling_matrix_from_impedance: impedance matrix must be square");
    if (!(r_d > 0.0))
        throw validation_error("coupling_matrix_from_impedance: r_d must be positive");

    const Eigen::MatrixXcd a =
        z + r_d * Eigen::MatrixXcd::Identity(z.rows(), z.cols());
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const Eigen::MatrixXcd m = lu.inverse();
    const double cond = a.cwiseAbs().colwise().sum().maxCoeff() *
                        m.cwiseAbs().colwise().sum().maxCoeff();
    if (!std::isfinite(cond) || cond > 1e12)
        throw numerical_error("coupling_matrix_from_impedance: near-singular impedance matrix "
                              "(condition estimate " +
                              std::to_string(cond) + ")");
    return m;
}

inline Eigen::MatrixXcd build_coupling_matrix(const CouplingParams &params, double wavelength)
{
    return coupling_matrix_from_impedance(build_impedance_matrix(params, wavelength),
                                          params.dissipation_resistance);
}

// Coupling-adjusted correlation M^{1/2} R M^{1/2}. M is complex symmetric,
// not Hermitian, so its principal square root comes from the general
// (Schur-based) matrix square root. The product is then generally neither
// Hermitian nor PSD; it is re-Hermitized as (A + A^H)/2 and projected back
// onto the PSD cone (negative eigenvalues clipped to zero), since the
// downstream factorization needs a Hermitian PSD input. Both corrections are
// recorded: hermitize_residual and psd_clip_residual.
inline CorrelationMatrix apply_coupling(const CorrelationMatrix &r, const Eigen::MatrixXcd &m)
{
    if (m.rows() != m.cols() || m.rows() != r.entries.rows())
        throw validation_error("apply_coupling: dimension mismatch between R and M");

    const Eigen::MatrixXcd m_sqrt = m.sqrt();
    if (!m_sqrt.allFinite())
        throw numerical_error("apply_coupling: matrix square root of M failed");

    const Eigen::MatrixXcd a = m_sqrt * r.entries * m_sqrt;
    CorrelationMatrix out = r;
    out.entries = 0.5 * (a + a.adjoint());
    out.coupling_adjusted = true;
    const double scale = out.entries.norm();
    out.hermitize_residual = scale > 0.0 ? 0.5 * (a - a.adjoint()).norm() / scale : 0.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(out.entries);
    if (eig.info() != Eigen::Success)
        throw numerical_error("apply_coupling: eigendecomposition of the adjusted matrix failed");
    if (eig.eigenvalues().minCoeff() < 0.0)
    {
        const Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
        out.psd_clip_residual =
            scale > 0.0 ? (eig.eigenvalues() - clipped).norm() / scale : 0.0;
        out.entries = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().adjoint();
        out.entries = 0.5 * (out.entries + out.entries.adjoint().eval());
    }
    return out;
}

} // namespace riscade
