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

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace riscade
{

// ------------------------------------------------------------------------
// Training design and measurement model
//
// Stacked over T_p slots, y = sqrt(rho) Q c + n with Q = X Psi,
// Psi = Phi (x) I_M and X the per-slot pilot diagonal. Pilots are
// unit-modulus symbols s_l; the power rho is carried by the explicit
// sqrt(rho) scalar, which is what makes the 1/sqrt(rho) prefactor of the LS
// estimator consistent.
// ------------------------------------------------------------------------

struct TrainingConfig
{
    int training_length = 0;    // T_p
    double pilot_power = 1.0;   // rho, linear
    double noise_variance = 1.0; // sigma^2, linear
    Eigen::VectorXcd pilots;    // unit-modulus, defaults to all-ones

    double snr() const { return pilot_power / noise_variance; } // gamma

    void validate(int ris_count) const
    {
        if (training_length < ris_count)
            throw validation_error("TrainingConfig: T_p >= K required for LS identifiability");
        if (!(pilot_power > 0.0) || !(noise_variance > 0.0))
            throw validation_error("TrainingConfig: pilot power and noise variance must be positive");
        if (pilots.size() != 0 && pilots.size() != training_length)
            throw validation_error("TrainingConfig: pilot vector length must equal T_p");
        for (Eigen::Index i = 0; i < pilots.size(); ++i)
            if (std::abs(std::abs(pilots(i)) - 1.0) > 1e-12)
                throw validation_error("TrainingConfig: pilots must be unit-modulus");
    }
};

// DFT phase schedule, phi(l, k) = exp(-j 2 pi (l-1)(k-1) / T_p) for
// 1-based l, k. Columns are orthogonal: Phi^H Phi = T_p I when T_p = K.
inline Eigen::MatrixXcd dft_phase_matrix(int t_p, int k)
{
    if (t_p < k)
        throw validation_error("dft_phase_matrix: T_p >= K required for identifiability");
    if (k < 1)
        throw validation_error("dft_phase_matrix: K must be positive");
    Eigen::MatrixXcd phi(t_p, k);
    for (int l = 0; l < t_p; ++l)
        for (int c = 0; c < k; ++c)
            phi(l, c) = std::polar(1.0, -2.0 * pi * l * c / t_p);
    return phi;
}

// Q = X Psi with Psi = Phi (x) I_M and X = diag(s_1 1_M, ..., s_Tp 1_M).
// Block (l, k) of Q is s_l phi(l, k) I_M; with unit-modulus pilots
// Q^H Q = T_p I_MK.
inline Eigen::MatrixXcd assemble_q(const Eigen::MatrixXcd &phases, const Eigen::VectorXcd &pilots,
                                   int m)
{
    if (m < 1)
        throw validation_error("assemble_q: M must be positive");
    if (pilots.size() != phases.rows())
        throw validation_error("assemble_q: pilot count must equal the number of training slots");
    const Eigen::Index t_p = phases.rows();
    const Eigen::Index k = phases.cols();
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(t_p * m, k * m);
    for (Eigen::Index l = 0; l < t_p; ++l)
        for (Eigen::Index c = 0; c < k; ++c)
        {
            const std::complex<double> v = pilots(l) * phases(l, c);
            for (int i = 0; i < m; ++i)
                q(l * m + i, c * m + i) = v;
        }
    return q;
}

// LS estimate c-hat = 1/sqrt(rho) (Q^H Q)^{-1} Q^H y; with DFT training this
// reduces to Q^H y / (sqrt(rho) T_p). Rank deficiency of Q is an error.
inline Eigen::VectorXcd ls_estimate(const Eigen::VectorXcd &y, const Eigen::MatrixXcd &q,
                                    double rho)
{
    if (y.size() != q.rows())
        throw validation_error("ls_estimate: measurement length must match Q rows");
    if (!(rho > 0.0))
        throw validation_error("ls_estimate: pilot power must be positive");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(q);
    if (qr.rank() < q.cols())
        throw numerical_error("ls_estimate: Q is rank deficient, channel not identifiable");
    return qr.solve(y) / std::sqrt(rho);
}

// LMMSE estimate
//   c-hat = sqrt(rho) R Q^H (rho Q R Q^H + sigma^2 I)^{-1} y,
// computed through a linear solve of the measurement-domain system (never an
// explicit inverse).
inline Eigen::VectorXcd lmmse_estimate(const Eigen::VectorXcd &y, const Eigen::MatrixXcd &q,
                                       double rho, double sigma2, const Eigen::MatrixXcd &r_cc)
{
    if (y.size() != q.rows() || r_cc.rows() != q.cols() || r_cc.rows() != r_cc.cols())
        throw validation_error("lmmse_estimate: dimension mismatch");
    if (!(rho > 0.0) || !(sigma2 > 0.0))
        throw validation_error("lmmse_estimate: rho and sigma^2 must be positive");

    const Eigen::MatrixXcd rqh = r_cc * q.adjoint();
    Eigen::MatrixXcd a = rho * q * rqh;
    a += sigma2 * Eigen::MatrixXcd::Identity(a.rows(), a.cols());
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(a);
    if (ldlt.info() != Eigen::Success)
        throw numerical_error("lmmse_estimate: measurement-domain system is indefinite");
    const Eigen::VectorXcd z = ldlt.solve(y);
    if (!z.allFinite())
        throw numerical_error("lmmse_estimate: solve produced non-finite values");
    return std::sqrt(rho) * (rqh * z);
}

// Theoretical error covariances under DFT training:
//   R_e_LS    = 1/(gamma T_p) I
//   R_e_LMMSE = (R_cc^{-1} + gamma T_p I)^{-1}
// The LMMSE form is evaluated through the eigendecomposition of R_cc with
// the map lambda -> lambda / (1 + gamma T_p lambda), which also covers
// singular R_cc.
struct ErrorCovariances
{
    Eigen::MatrixXcd ls;
    Eigen::MatrixXcd lmmse;
};

inline ErrorCovariances theoretical_error_covariances(double gamma, int t_p,
                                                      const Eigen::MatrixXcd &r_cc)
{
    if (!(gamma > 0.0) || t_p < 1)
        throw validation_error("theoretical_error_covariances: gamma and T_p must be positive");
    if (r_cc.rows() != r_cc.cols())
        throw validation_error("theoretical_error_covariances: R_cc must be square");

    const Eigen::Index n = r_cc.rows();
    ErrorCovariances out;
    out.ls = Eigen::MatrixXcd::Identity(n, n) / (gamma * t_p);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r_cc);
    if (eig.info() != Eigen::Success)
        throw numerical_error("theoretical_error_covariances: eigendecomposition failed");
    Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
    Eigen::VectorXd mapped(n);
    for (Eigen::Index i = 0; i < n; ++i)
        mapped(i) = lambda(i) / (1.0 + gamma * t_p * lambda(i));
    out.lmmse = eig.eigenvectors() * mapped.asDiagonal() * eig.eigenvectors().adjoint();
    return out;
}

// Eigendecomposition of a channel covariance, computed once per scenario and
// reused across SNR points and trials.
struct CovarianceEigen
{
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd values; // clamped to >= 0
    double trace = 0.0;

    static CovarianceEigen from(const Eigen::MatrixXcd &r_cc)
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r_cc);
        if (eig.info() != Eigen::Success)
            throw numerical_error("CovarianceEigen: eigendecomposition failed");
        CovarianceEigen out;
        out.vectors = eig.eigenvectors();
        out.values = eig.eigenvalues().cwiseMax(0.0);
        out.trace = out.values.sum();
        return out;
    }
};

// Precomputed LMMSE filter for DFT training. With Q^H Q = T_p I the
// measurement-domain solve collapses to the eigenvalue map:
//   c-hat = sqrt(rho)/sigma^2 U diag(lambda / (1 + gamma T_p lambda)) U^H Q^H y.
// Returns the MK x (T_p M) matrix applied per trial.
inline Eigen::MatrixXcd lmmse_filter(const CovarianceEigen &eig, const Eigen::MatrixXcd &q,
                                     double rho, double sigma2, int t_p)
{
    if (!(rho > 0.0) || !(sigma2 > 0.0) || t_p < 1)
        throw validation_error("lmmse_filter: rho, sigma^2 and T_p must be positive");
    const Eigen::Index n = eig.values.size();
    if (q.cols() != n)
        throw validation_error("lmmse_filter: Q column count must match the covariance size");
    const Eigen::MatrixXcd gram_residual =
        q.adjoint() * q - static_cast<double>(t_p) * Eigen::MatrixXcd::Identity(n, n);
    if (gram_residual.cwiseAbs().maxCoeff() > 1e-9 * t_p)
        throw validation_error("lmmse_filter: Q^H Q != T_p I; use lmmse_estimate instead");

    const double gamma = rho / sigma2;
    Eigen::VectorXd mapped(n);
    for (Eigen::Index i = 0; i < n; ++i)
        mapped(i) = eig.values(i) / (1.0 + gamma * t_p * eig.values(i));
    return (std::sqrt(rho) / sigma2) *
           (eig.vectors * mapped.asDiagonal() * (eig.vectors.adjoint() * q.adjoint()));
}

// tr(R_e_LMMSE) / tr(R_cc) through the eigenvalue map, without forming the
// MK x MK error covariance.
inline double lmmse_theory_nmse(const CovarianceEigen &eig, double gamma, int t_p)
{
    if (!(eig.trace > 0.0))
        throw validation_error("lmmse_theory_nmse: covariance trace must be positive");
    double tr_e = 0.0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
        tr_e += eig.values(i) / (1.0 + gamma * t_p * eig.values(i));
    return tr_e / eig.trace;
}

inline double ls_theory_nmse(double gamma, int t_p, Eigen::Index dimension, double trace_r_cc)
{
    return static_cast<double>(dimension) / (gamma * t_p * trace_r_cc);
}

// NMSE = tr(R_e) / tr(R_cc).
inline double nmse(const Eigen::MatrixXcd &r_e, const Eigen::MatrixXcd &r_cc)
{
    const double tr_cc = r_cc.trace().real();
    if (!(tr_cc > 0.0))
        throw validation_error("nmse: channel covariance trace must be positive");
    return r_e.trace().real() / tr_cc;
}

// Cascaded-channel covariance R_cc = (R_RU o R_RB) (x) R_BR in the
// column-major stacking of c. The closed form carries the RIS-side factor of
// H_BR untransposed; the first-principles covariance of the Kronecker
// sampler puts a transpose on it, so the orientation is switchable and the
// covariance consistency test reports both.
inline Eigen::MatrixXcd cascaded_covariance(const Eigen::MatrixXcd &r_ru,
                                            const Eigen::MatrixXcd &r_rb,
                                            const Eigen::MatrixXcd &r_br, bool transpose_rrb)
{
    const Eigen::Index k = r_ru.rows();
    const Eigen::Index m = r_br.rows();
    if (r_ru.cols() != k || r_rb.rows() != k || r_rb.cols() != k || r_br.cols() != m)
        throw validation_error("cascaded_covariance: factor dimension mismatch");

    Eigen::MatrixXcd hadamard = r_ru.cwiseProduct(r_rb);
    if (transpose_rrb)
        hadamard = r_ru.cwiseProduct(r_rb.transpose());
    Eigen::MatrixXcd r_cc(m * k, m * k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b)
            r_cc.block(a * m, b * m, m, m) = hadamard(a, b) * r_br;
    return r_cc;
}

} // namespace riscade
