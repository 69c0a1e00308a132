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
#include "riscade/mgdist.hpp"
#include "riscade/rng.hpp"
#include "riscade/spatial_correlation.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace riscade
{

// Small-scale fading magnitude law. The mixture models the MAGNITUDE; the
// complex fading entry is (X / s) e^{j phi} with independent uniform phase,
// which gives zero mean (required for a correlation matrix to be a
// covariance) and, through the second-moment normalizer s = sqrt(E[X^2]),
// unit power E[|entry|^2] = 1. All power scaling lives in the correlation
// matrices and the Omega factors.
struct FadingLaw
{
    MGParams mg;
    double second_moment_root = 1.0; // s

    static FadingLaw from(const MGParams &params)
    {
        params.validate();
        return {params, std::sqrt(mg_second_moment(params))};
    }

    // Normalized magnitude draw, E[m^2] = 1.
    double sample_magnitude(RngStream &rng) const { return mg_sample(mg, rng) / second_moment_root; }

    std::complex<double> sample_entry(RngStream &rng) const
    {
        const double m = sample_magnitude(rng);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double phase = -pi + 2.0 * pi * unif(rng);
        return std::polar(m, phase);
    }
};

// iid fading matrix with zero-mean, unit-second-moment entries.
inline Eigen::MatrixXcd sample_iid_mg_matrix(Eigen::Index rows, Eigen::Index cols,
                                             const FadingLaw &law, RngStream &rng)
{
    if (rows < 1 || cols < 1)
        throw validation_error("sample_iid_mg_matrix: dimensions must be positive");
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            m(r, c) = law.sample_entry(rng);
    return m;
}

// Kronecker draw, vector form: h = R^{1/2} h_tilde. sqrt_r is the Hermitian
// PSD factor from hermitian_sqrt.
inline Eigen::VectorXcd kronecker_channel_vector(const Eigen::MatrixXcd &sqrt_r,
                                                 const FadingLaw &law, RngStream &rng)
{
    if (sqrt_r.rows() != sqrt_r.cols())
        throw validation_error("kronecker_channel_vector: square factor expected");
    return sqrt_r * sample_iid_mg_matrix(sqrt_r.rows(), 1, law, rng);
}

// Kronecker draw, matrix form: H = R_rx^{1/2} H_tilde R_tx^{1/2}.
inline Eigen::MatrixXcd kronecker_channel_matrix(const Eigen::MatrixXcd &sqrt_rx,
                                                 const Eigen::MatrixXcd &sqrt_tx,
                                                 const FadingLaw &law, RngStream &rng)
{
    if (sqrt_rx.rows() != sqrt_rx.cols() || sqrt_tx.rows() != sqrt_tx.cols())
        throw validation_error("kronecker_channel_matrix: square factors expected");
    return sqrt_rx * sample_iid_mg_matrix(sqrt_rx.rows(), sqrt_tx.rows(), law, rng) * sqrt_tx;
}

// Direct spherical-wave sum, the ground-truth sampler behind the near-field
// correlation integral. For element q and scatterer n on ring l:
//   h_q = sqrt(Omega) sum_l sqrt(eps_l / N_l) sum_n rho_n h_n
//         (d0 / d_qn) exp(-K_a/2 (d_qn - d0))
//         exp(-j 2 pi / lambda (t_n + d_qn) + j psi_n)
// with d0 the reference-element distance and t_n the transmitter-to-
// scatterer distance (phase only; its spreading loss is folded into the
// normalized magnitudes).
inline Eigen::VectorXcd direct_swm_channel(const UlaGeometry &geom, const UePlacement &tx,
                                           std::span<const ClusterRing> rings,
                                           const PropagationParams &prop,
                                           std::span<const std::vector<ScattererDraw>> draws)
{
    geom.validate();
    tx.validate();
    prop.validate();
    validate_rings(rings, /*require_origin_free=*/true);
    if (draws.size() != rings.size())
        throw validation_error("direct_swm_channel: one draw set per ring required");

    const double wavenumber = 2.0 * pi / prop.wavelength();
    const double ka = prop.absorption_coefficient;
    const Eigen::Vector2d tx_pos = tx.position().head<2>();

    Eigen::VectorXcd h = Eigen::VectorXcd::Zero(geom.element_count);
    for (std::size_t l = 0; l < rings.size(); ++l)
    {
        const auto &ring = rings[l];
        const double cluster_scale =
            std::sqrt(prop.total_power * ring.power_fraction / draws[l].size());
        for (const auto &d : draws[l])
        {
            const double t_n = (ring.scatterer_position(d.angle) - tx_pos).norm();
            const double d0 = ring_scatterer_distance(ring, d.angle, 0, geom.spacing);
            for (int i = 0; i < geom.element_count; ++i)
            {
                const double dq =
                    ring_scatterer_distance(ring, d.angle, geom.index_of(i), geom.spacing);
                const double amp = cluster_scale * d.magnitude * d.reflection * (d0 / dq) *
                                   std::exp(-0.5 * ka * (dq - d0));
                h(i) += std::polar(amp, -wavenumber * (t_n + dq) + d.phase);
            }
        }
    }
    return h;
}

// A sampled channel triple: the two link channels, the cascaded matrix
// C = H_BR diag(h_RU), and its column-major vectorization c (index k M + m),
// the stacking the (.) (x) R_BR covariance block structure assumes.
struct ChannelRealization
{
    Eigen::VectorXcd h_ru;     // K
    Eigen::MatrixXcd h_br;     // M x K
    Eigen::MatrixXcd cascaded; // M x K
    Eigen::VectorXcd stacked;  // M K
};

inline ChannelRealization cascade(const Eigen::VectorXcd &h_ru, const Eigen::MatrixXcd &h_br)
{
    if (h_br.cols() != h_ru.size())
        throw validation_error("cascade: H_BR column count must match h_RU length");
    ChannelRealization out;
    out.h_ru = h_ru;
    out.h_br = h_br;
    out.cascaded = h_br * h_ru.asDiagonal();
    out.stacked = out.cascaded.reshaped(); // column-major: c(k M + m) = C(m, k)
    return out;
}

} // namespace riscade
