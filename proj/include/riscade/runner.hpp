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

#include "riscade/channel_synthesis.hpp"
#include "riscade/config.hpp"
#include "riscade/estimation.hpp"
#include "riscade/mutual_coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

namespace riscade
{

// ------------------------------------------------------------------------
// Scenario assembly: geometry -> correlations (-> coupling) -> R_cc and the
// sampler factors, all deterministic given a resolved configuration.
// ------------------------------------------------------------------------

struct ScenarioAssembly
{
    UlaGeometry bs, ris;
    UePlacement ue;
    std::vector<ClusterRing> rings_ru, rings_rb, rings_br;
    PropagationParams prop;

    CorrelationMatrix r_ru, r_rb, r_br; // truth (coupling-adjusted R_BR when enabled)
    Eigen::MatrixXcd sqrt_ru, sqrt_rb, sqrt_br;
    Eigen::MatrixXcd r_cc_true;
    CovarianceEigen eig_true;
    std::string matched_label;

    // Mismatch priors, present when the scenario requests them.
    std::optional<Eigen::MatrixXcd> r_cc_far;        // far-field-built prior
    std::optional<Eigen::MatrixXcd> r_cc_nocoupling; // coupling-free prior

    FadingLaw law_ru, law_br;
    Eigen::MatrixXcd q; // measurement operator (pilot power carried separately)
};

namespace detail
{
inline CorrelationMatrix build_link_correlation(const UlaGeometry &geom,
                                                std::span<const ClusterRing> rings,
                                                const PropagationParams &prop, FieldType field,
                                                int quad_points, FarfieldAbsorption absorption)
{
    return field == FieldType::near
               ? build_nearfield_correlation(geom, rings, prop, quad_points)
               : build_farfield_correlation(geom, rings, prop, quad_points, absorption);
}
} // namespace detail

inline ScenarioAssembly assemble_scenario(const ScenarioConfig &cfg)
{
    if (!cfg.resolved)
        throw validation_error("assemble_scenario: configuration has unresolved auto angles; "
                               "call resolve_scenario first");
    validate_scenario(cfg);

    ScenarioAssembly as;
    const double lambda = cfg.wavelength();
    as.bs = UlaGeometry{cfg.bs_elements, cfg.bs_spacing_lambda * lambda};
    as.ris = UlaGeometry{cfg.ris_elements, cfg.ris_spacing_lambda * lambda};
    as.ue = UePlacement{cfg.ue.distance, cfg.ue.theta};
    as.prop = PropagationParams{cfg.center_frequency, cfg.absorption, cfg.omega};
    as.law_ru = FadingLaw::from(cfg.mg_ru);
    as.law_br = FadingLaw::from(cfg.mg_br);

    const int m = cfg.bs_elements, k = cfg.ris_elements;
    if (cfg.identity_correlations)
    {
        as.r_ru.entries = Eigen::MatrixXcd::Identity(k, k);
        as.r_rb.entries = Eigen::MatrixXcd::Identity(k, k);
        as.r_br.entries = Eigen::MatrixXcd::Identity(m, m);
        as.sqrt_ru = as.r_ru.entries;
        as.sqrt_rb = as.r_rb.entries;
        as.sqrt_br = as.r_br.entries;
        as.r_cc_true = Eigen::MatrixXcd::Identity(m * k, m * k);
        as.matched_label = "matched-identity";
    }
    else
    {
        as.rings_ru = cfg.rings_ru.to_rings();
        as.rings_rb = cfg.rings_rb.to_rings();
        as.rings_br = cfg.rings_br.to_rings();

        as.r_ru = detail::build_link_correlation(as.ris, as.rings_ru, as.prop, cfg.field_ru,
                                                 cfg.quad_points, cfg.farfield_absorption);
        as.r_rb = detail::build_link_correlation(as.ris, as.rings_rb, as.prop, cfg.field_rb,
                                                 cfg.quad_points, cfg.farfield_absorption);
        CorrelationMatrix r_br_raw =
            detail::build_link_correlation(as.bs, as.rings_br, as.prop, cfg.field_br,
                                           cfg.quad_points, cfg.farfield_absorption);

        as.r_br = r_br_raw;
        if (cfg.coupling.enabled)
        {
            CouplingParams cp;
            cp.dipole_length = cfg.coupling.dipole_length_lambda * lambda;
            cp.dissipation_resistance = cfg.coupling.r_d_ohms;
            cp.spacing = as.bs.spacing;
            cp.element_count = m;
            as.r_br = apply_coupling(r_br_raw, build_coupling_matrix(cp, lambda));
        }

        as.sqrt_ru = hermitian_sqrt(as.r_ru.entries);
        as.sqrt_rb = hermitian_sqrt(as.r_rb.entries);
        as.sqrt_br = hermitian_sqrt(as.r_br.entries);
        as.r_cc_true = cascaded_covariance(as.r_ru.entries, as.r_rb.entries, as.r_br.entries,
                                           cfg.rcc_transpose_rrb);
        const bool all_near = cfg.field_ru == FieldType::near &&
                              cfg.field_rb == FieldType::near && cfg.field_br == FieldType::near;
        const bool all_far = cfg.field_ru == FieldType::far && cfg.field_rb == FieldType::far &&
                             cfg.field_br == FieldType::far;
        as.matched_label = all_near ? "matched-near" : (all_far ? "matched-far" : "matched-mixed");

        if (cfg.mismatch_far)
        {
            // Planar-wavefront prior for the same scenario geometry; keeps
            // the coupling treatment of the truth so only the field model
            // differs.
            auto far_ru = build_farfield_correlation(as.ris, as.rings_ru, as.prop,
                                                     cfg.quad_points, cfg.farfield_absorption);
            auto far_rb = build_farfield_correlation(as.ris, as.rings_rb, as.prop,
                                                     cfg.quad_points, cfg.farfield_absorption);
            auto far_br = build_farfield_correlation(as.bs, as.rings_br, as.prop,
                                                     cfg.quad_points, cfg.farfield_absorption);
            if (cfg.coupling.enabled)
            {
                CouplingParams cp;
                cp.dipole_length = cfg.coupling.dipole_length_lambda * lambda;
                cp.dissipation_resistance = cfg.coupling.r_d_ohms;
                cp.spacing = as.bs.spacing;
                cp.element_count = m;
                far_br = apply_coupling(far_br, build_coupling_matrix(cp, lambda));
            }
            as.r_cc_far = cascaded_covariance(far_ru.entries, far_rb.entries, far_br.entries,
                                              cfg.rcc_transpose_rrb);
        }
        if (cfg.mismatch_nocoupling)
            as.r_cc_nocoupling = cascaded_covariance(as.r_ru.entries, as.r_rb.entries,
                                                     r_br_raw.entries, cfg.rcc_transpose_rrb);
    }
    as.eig_true = CovarianceEigen::from(as.r_cc_true);

    as.q = assemble_q(dft_phase_matrix(cfg.training_length, k),
                      Eigen::VectorXcd::Ones(cfg.training_length), m);
    return as;
}

// ------------------------------------------------------------------------
// Monte Carlo sweep
// ------------------------------------------------------------------------

struct ReportRow
{
    double snr_db = 0.0;
    std::string estimator; // "ls" | "lmmse"
    std::string prior;     // "none" | matched label | "mismatch-far" | "mismatch-nocoupling"
    double nmse_theory = std::numeric_limits<double>::quiet_NaN();
    double nmse_sim = std::numeric_limits<double>::quiet_NaN();
    double stderr_sim = std::numeric_limits<double>::quiet_NaN();
    long trials = 0;
};

struct RunResult
{
    std::vector<ReportRow> rows;
    std::string resolved_config;
    std::uint64_t seed = 0;
    int workers = 1;
};

namespace detail
{

struct TrialStats
{
    double mean = std::numeric_limits<double>::quiet_NaN();
    double stderr_mean = std::numeric_limits<double>::quiet_NaN();
};

inline TrialStats reduce_trials(const std::vector<double> &values)
{
    // Fixed reduction order: results do not depend on the worker count.
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values)
        sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values)
        ss += (v - mean) * (v - mean);
    const double var = values.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

} // namespace detail

inline RunResult run_sweep(const ScenarioConfig &cfg, int workers = 1)
{
    if (workers < 1)
        throw validation_error("run_sweep: worker count must be positive");
    const ScenarioAssembly as = assemble_scenario(cfg);

    RunResult result;
    result.resolved_config = serialize_scenario(cfg);
    result.seed = cfg.seed;
    result.workers = workers;

    const int m = cfg.bs_elements, k = cfg.ris_elements, t_p = cfg.training_length;
    const Eigen::Index dim = static_cast<Eigen::Index>(m) * k;
    const double sigma2 = 1.0;
    const double trace_true = as.eig_true.trace;

    struct PriorSpec
    {
        std::string label;
        const Eigen::MatrixXcd *r_cc; // nullptr = use eig_true
        CovarianceEigen eig;
    };
    std::vector<PriorSpec> priors;
    if (!cfg.ls_only)
    {
        priors.push_back({as.matched_label, nullptr, as.eig_true});
        if (as.r_cc_far)
            priors.push_back({"mismatch-far", &*as.r_cc_far, CovarianceEigen::from(*as.r_cc_far)});
        if (as.r_cc_nocoupling)
            priors.push_back({"mismatch-nocoupling", &*as.r_cc_nocoupling,
                              CovarianceEigen::from(*as.r_cc_nocoupling)});
    }

    for (std::size_t s = 0; s < cfg.snr_db.size(); ++s)
    {
        const double snr_db = cfg.snr_db[s];
        const double gamma = std::pow(10.0, snr_db / 10.0);
        const double rho = gamma * sigma2;

        // Per-prior estimation filter applied to Q^H y.
        std::vector<Eigen::MatrixXcd> filters(priors.size());
        for (std::size_t p = 0; p < priors.size(); ++p)
        {
            Eigen::VectorXd mapped(dim);
            for (Eigen::Index i = 0; i < dim; ++i)
                mapped(i) = priors[p].eig.values(i) /
                            (1.0 + gamma * t_p * priors[p].eig.values(i));
            filters[p] = (std::sqrt(rho) / sigma2) *
                         (priors[p].eig.vectors * mapped.asDiagonal() *
                          priors[p].eig.vectors.adjoint());
        }

        std::vector<double> err_ls(static_cast<std::size_t>(cfg.trials));
        std::vector<std::vector<double>> err_prior(
            priors.size(), std::vector<double>(static_cast<std::size_t>(cfg.trials)));

        auto run_range = [&](long begin, long end) {
            for (long t = begin; t < end; ++t)
            {
                auto rng = make_stream(cfg.seed, 1000 + s, static_cast<std::uint64_t>(t));
                const Eigen::VectorXcd h_ru = as.sqrt_ru *
                                              sample_iid_mg_matrix(k, 1, as.law_ru, rng);
                const Eigen::MatrixXcd h_br =
                    as.sqrt_br * sample_iid_mg_matrix(m, k, as.law_br, rng) * as.sqrt_rb;
                const ChannelRealization chan = cascade(h_ru, h_br);

                std::normal_distribution<double> normal(0.0, std::sqrt(sigma2 / 2.0));
                Eigen::VectorXcd y = std::sqrt(rho) * (as.q * chan.stacked);
                for (Eigen::Index i = 0; i < y.size(); ++i)
                    y(i) += std::complex<double>(normal(rng), normal(rng));

                const Eigen::VectorXcd qhy = as.q.adjoint() * y;
                const Eigen::VectorXcd c_ls = qhy / (std::sqrt(rho) * t_p);
                err_ls[static_cast<std::size_t>(t)] = (c_ls - chan.stacked).squaredNorm();
                for (std::size_t p = 0; p < priors.size(); ++p)
                {
                    const Eigen::VectorXcd c_hat = filters[p] * qhy;
                    err_prior[p][static_cast<std::size_t>(t)] =
                        (c_hat - chan.stacked).squaredNorm();
                }
            }
        };

        if (cfg.trials > 0)
        {
            const int used = static_cast<int>(
                std::min<long>(workers, std::max<long>(1, cfg.trials)));
            if (used == 1)
                run_range(0, cfg.trials);
            else
            {
                std::vector<std::thread> pool;
                const long chunk = (cfg.trials + used - 1) / used;
                for (int w = 0; w < used; ++w)
                {
                    const long begin = w * chunk;
                    const long end = std::min<long>(cfg.trials, begin + chunk);
                    if (begin < end)
                        pool.emplace_back(run_range, begin, end);
                }
                for (auto &th : pool)
                    th.join();
            }
        }

        ReportRow ls_row;
        ls_row.snr_db = snr_db;
        ls_row.estimator = "ls";
        ls_row.prior = "none";
        ls_row.nmse_theory = ls_theory_nmse(gamma, t_p, dim, trace_true);
        ls_row.trials = cfg.trials;
        if (cfg.trials > 0)
        {
            const auto stats = detail::reduce_trials(err_ls);
            ls_row.nmse_sim = stats.mean / trace_true;
            ls_row.stderr_sim = stats.stderr_mean / trace_true;
        }
        result.rows.push_back(ls_row);

        for (std::size_t p = 0; p < priors.size(); ++p)
        {
            ReportRow row;
            row.snr_db = snr_db;
            row.estimator = "lmmse";
            row.prior = priors[p].label;
            // Closed-form error covariance only applies to the matched prior.
            if (priors[p].r_cc == nullptr)
                row.nmse_theory = lmmse_theory_nmse(as.eig_true, gamma, t_p);
            row.trials = cfg.trials;
            if (cfg.trials > 0)
            {
                const auto stats = detail::reduce_trials(err_prior[p]);
                row.nmse_sim = stats.mean / trace_true;
                row.stderr_sim = stats.stderr_mean / trace_true;
            }
            result.rows.push_back(row);
        }
    }
    return result;
}

// ------------------------------------------------------------------------
// CSV output. Every file starts with the schema-version line and embeds the
// full resolved configuration as "#cfg" comment lines, so a result can be
// replayed bit-identically by feeding the CSV back as the config file.
// ------------------------------------------------------------------------

namespace detail
{
inline std::string format_csv_double(double v)
{
    if (std::isnan(v))
        return "nan";
    return format_double(v);
}

inline void write_embedded_config(std::ostream &out, const std::string &config_text)
{
    std::istringstream lines(config_text);
    std::string line;
    while (std::getline(lines, line))
        out << (line.empty() ? "#cfg" : "#cfg ") << line << "\n";
}
} // namespace detail

inline void write_run_csv(const RunResult &result, std::ostream &out)
{
    out << csv_schema_line << "\n";
    out << "# angle draws: uniform over [-pi/2, pi/2), resolved once from the master seed\n";
    out << "# workers = " << result.workers << "\n";
    detail::write_embedded_config(out, result.resolved_config);
    out << "snr_db,estimator,prior,nmse_theory,nmse_sim,stderr_sim,trials\n";
    for (const auto &row : result.rows)
        out << detail::format_csv_double(row.snr_db) << ',' << row.estimator << ',' << row.prior
            << ',' << detail::format_csv_double(row.nmse_theory) << ','
            << detail::format_csv_double(row.nmse_sim) << ','
            << detail::format_csv_double(row.stderr_sim) << ',' << row.trials << "\n";
}

// Correlation-matrix dump for one link, columns (q, p, re, im) with signed
// element indices.
inline void dump_correlation_csv(const ScenarioConfig &cfg, const std::string &link,
                                 std::ostream &out)
{
    const ScenarioAssembly as = assemble_scenario(cfg);
    const CorrelationMatrix *r = nullptr;
    const UlaGeometry *geom = nullptr;
    if (link == "ris_ue")
    {
        r = &as.r_ru;
        geom = &as.ris;
    }
    else if (link == "ris_bs")
    {
        r = &as.r_rb;
        geom = &as.ris;
    }
    else if (link == "bs_ris")
    {
        r = &as.r_br;
        geom = &as.bs;
    }
    else
        throw validation_error("unknown correlation link '" + link +
                               "'; expected ris_ue, ris_bs or bs_ris");

    out << csv_schema_line << "\n";
    detail::write_embedded_config(out, serialize_scenario(cfg));
    out << "# link = " << link
        << ", field = " << (r->field_type == FieldType::near ? "near" : "far")
        << ", coupling_adjusted = " << (r->coupling_adjusted ? 1 : 0)
        << ", quad_points = " << r->quad_points << "\n";
    out << "q,p,re,im\n";
    for (Eigen::Index i = 0; i < r->entries.rows(); ++i)
        for (Eigen::Index j = 0; j < r->entries.cols(); ++j)
            out << geom->index_of(static_cast<int>(i)) << ','
                << geom->index_of(static_cast<int>(j)) << ','
                << detail::format_double(r->entries(i, j).real()) << ','
                << detail::format_double(r->entries(i, j).imag()) << "\n";
}

// Debug dump of the first realization per SNR point.
inline void dump_channels_csv(const ScenarioConfig &cfg, std::ostream &out)
{
    const ScenarioAssembly as = assemble_scenario(cfg);
    const int m = cfg.bs_elements, k = cfg.ris_elements;
    out << csv_schema_line << "\n";
    out << "kind,snr_db,row,col,re,im\n";
    for (std::size_t s = 0; s < cfg.snr_db.size(); ++s)
    {
        auto rng = make_stream(cfg.seed, 1000 + s, 0);
        const Eigen::VectorXcd h_ru = as.sqrt_ru * sample_iid_mg_matrix(k, 1, as.law_ru, rng);
        const Eigen::MatrixXcd h_br =
            as.sqrt_br * sample_iid_mg_matrix(m, k, as.law_br, rng) * as.sqrt_rb;
        const ChannelRealization chan = cascade(h_ru, h_br);
        for (int i = 0; i < k; ++i)
            out << "h_ru," << detail::format_double(cfg.snr_db[s]) << ',' << i << ",0,"
                << detail::format_double(chan.h_ru(i).real()) << ','
                << detail::format_double(chan.h_ru(i).imag()) << "\n";
        for (int c = 0; c < k; ++c)
            for (int i = 0; i < m; ++i)
                out << "h_br," << detail::format_double(cfg.snr_db[s]) << ',' << i << ',' << c
                    << ',' << detail::format_double(chan.h_br(i, c).real()) << ','
                    << detail::format_double(chan.h_br(i, c).imag()) << "\n";
        for (int c = 0; c < k; ++c)
            for (int i = 0; i < m; ++i)
                out << "c," << detail::format_double(cfg.snr_db[s]) << ',' << i << ',' << c << ','
                    << detail::format_double(chan.cascaded(i, c).real()) << ','
                    << detail::format_double(chan.cascaded(i, c).imag()) << "\n";
    }
}

} // namespace riscade
