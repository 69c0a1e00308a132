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

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace riscade
{

// ------------------------------------------------------------------------
// Mixture-gamma (MG) distribution
//
// A finite convex mixture of gamma densities,
//   f(x) = sum_j eps_j x^(alpha_j - 1) exp(-beta_j x),
//   eps_j = w_j beta_j^alpha_j / Gamma(alpha_j),
// used here to model the magnitude of small-scale fading. The J = 1 cases
// reduce to familiar laws: alpha = 1 is the exponential (Rayleigh power),
// alpha = m, beta = m/omega is Nakagami-m power, and general (alpha, beta)
// is the plain gamma fit.
// ------------------------------------------------------------------------

struct MGComponent
{
    double weight; // w_j, convex: positive, weights sum to one
    double shape;  // alpha_j > 0
    double rate;   // beta_j > 0
};

struct MGParams
{
    std::vector<MGComponent> components;

    std::size_t count() const { return components.size(); }

    void validate() const
    {
        if (components.empty())
            throw validation_error("MGParams: at least one gamma component required");
        double wsum = 0.0;
        for (const auto &c : components)
        {
            if (!(c.weight > 0.0))
                throw validation_error("MGParams: component weights must be positive");
            if (!(c.shape > 0.0) || !std::isfinite(c.shape))
                throw validation_error("MGParams: component shapes must be positive");
            if (!(c.rate > 0.0) || !std::isfinite(c.rate))
                throw validation_error("MGParams: component rates must be positive");
            wsum += c.weight;
        }
        if (std::abs(wsum - 1.0) > 1e-12)
            throw validation_error("MGParams: weights must sum to 1 within 1e-12 (got " +
                                   std::to_string(wsum) + ")");
    }

    static MGParams single(double shape, double rate) { return MGParams{{{1.0, shape, rate}}}; }
};

// log eps_j = log w_j + alpha_j log beta_j - lgamma(alpha_j); kept in log
// space so large shapes do not overflow the beta^alpha factor.
inline double mg_log_eps(const MGComponent &c)
{
    return std::log(c.weight) + c.shape * std::log(c.rate) - std::lgamma(c.shape);
}

// Density of the mixture at x >= 0. For components with alpha < 1 the density
// is unbounded at the origin, so mg_pdf(params, 0) returns +infinity in that
// case; samplers never emit exactly 0, so the singularity is reported rather
// than clamped.
inline double mg_pdf(const MGParams &params, double x)
{
    params.validate();
    if (x < 0.0)
        throw std::domain_error("mg_pdf: x must be nonnegative");
    if (x == 0.0)
    {
        double v = 0.0;
        for (const auto &c : params.components)
        {
            if (c.shape < 1.0)
                return std::numeric_limits<double>::infinity();
            if (c.shape == 1.0)
                v += std::exp(mg_log_eps(c)); // x^0 term survives
        }
        return v;
    }
    const double lx = std::log(x);
    double v = 0.0;
    for (const auto &c : params.components)
        v += std::exp(mg_log_eps(c) + (c.shape - 1.0) * lx - c.rate * x);
    return v;
}

struct Moments
{
    double mean;
    double variance;
};

// Mixture mean and variance:
//   E[X]   = sum_j w_j alpha_j / beta_j
//   var(X) = sum_j w_j (alpha_j / beta_j^2 + (alpha_j / beta_j - E[X])^2)
inline Moments mg_moments(const MGParams &params)
{
    params.validate();
    double mean = 0.0;
    for (const auto &c : params.components)
        mean += c.weight * c.shape / c.rate;
    double var = 0.0;
    for (const auto &c : params.components)
    {
        const double m = c.shape / c.rate;
        var += c.weight * (c.shape / (c.rate * c.rate) + (m - mean) * (m - mean));
    }
    return {mean, var};
}

// E[X^2] = sum_j w_j alpha_j (alpha_j + 1) / beta_j^2; the second-moment
// normalizer used by the fading law.
inline double mg_second_moment(const MGParams &params)
{
    params.validate();
    double m2 = 0.0;
    for (const auto &c : params.components)
        m2 += c.weight * c.shape * (c.shape + 1.0) / (c.rate * c.rate);
    return m2;
}

// Draws one variate: pick component j with probability w_j, then a
// Gamma(shape alpha_j, rate beta_j) variate. Any exact-distribution gamma
// sampler satisfies the contract; the standard library one is used here and
// correctness is enforced by the goodness-of-fit tests.
inline double mg_sample(const MGParams &params, RngStream &rng)
{
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng);
    std::size_t j = params.components.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < params.components.size(); ++i)
    {
        acc += params.components[i].weight;
        if (u <= acc)
        {
            j = i;
            break;
        }
    }
    const auto &c = params.components[j];
    std::gamma_distribution<double> gamma(c.shape, 1.0 / c.rate);
    return gamma(rng);
}

// ------------------------------------------------------------------------
// Gauss-Laguerre quadrature: int_0^inf e^{-t} f(t) dt ~= sum_a w_a f(t_a)
// ------------------------------------------------------------------------

struct GaussLaguerreRule
{
    int order = 0;
    std::vector<double> nodes;   // roots of L_A, strictly increasing
    std::vector<double> weights; // t_a / ((A+1)^2 L_{A+1}(t_a)^2)
};

namespace detail
{
// Laguerre polynomial values L_n(x) and L_{n-1}(x) by the three-term
// recurrence (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}.
inline void laguerre_pair(int n, double x, double &ln, double &lnm1)
{
    double p0 = 1.0, p1 = 1.0 - x;
    if (n == 0)
    {
        ln = p0;
        lnm1 = 0.0;
        return;
    }
    for (int k = 1; k < n; ++k)
    {
        const double p2 = ((2.0 * k + 1.0 - x) * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    ln = p1;
    lnm1 = p0;
}
} // namespace detail

// Nodes are found by Newton iteration from the standard initial guesses;
// orders above 128 are rejected because the root finding degrades there.
inline GaussLaguerreRule gauss_laguerre_rule(int order)
{
    if (order < 1 || order > 128)
        throw validation_error("gauss_laguerre_rule: order must be in [1, 128]");

    GaussLaguerreRule rule;
    rule.order = order;
    rule.nodes.resize(order);
    rule.weights.resize(order);

    const int n = order;
    double z = 0.0;
    for (int i = 0; i < n; ++i)
    {
        if (i == 0)
            z = 3.0 / (1.0 + 2.4 * n);
        else if (i == 1)
            z += 15.0 / (1.0 + 2.5 * n);
        else
        {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[i - 2]);
        }
        double ln = 0.0, lnm1 = 0.0;
        for (int it = 0;; ++it)
        {
            if (it > 200)
                throw numerical_error("gauss_laguerre_rule: Newton iteration did not converge");
            detail::laguerre_pair(n, z, ln, lnm1);
            const double deriv = n * (ln - lnm1) / z; // L'_n(x) = n (L_n - L_{n-1}) / x
            const double z1 = z;
            z = z1 - ln / deriv;
            if (std::abs(z - z1) <= 1e-14 * std::max(1.0, std::abs(z)))
                break;
        }
        double lnp1 = 0.0, lnp0 = 0.0;
        detail::laguerre_pair(n + 1, z, lnp1, lnp0);
        rule.nodes[i] = z;
        rule.weights[i] = z / ((n + 1.0) * (n + 1.0) * lnp1 * lnp1);
        if (i > 0 && !(rule.nodes[i] > rule.nodes[i - 1]))
            throw numerical_error("gauss_laguerre_rule: nodes not strictly increasing");
    }
    return rule;
}

// ------------------------------------------------------------------------
// Product of two independent MG variables
//
// The product is again MG-distributed once the inner integral is replaced by
// a Gauss-Laguerre sum: for factors (w_u, alpha_u, beta_u) x
// (w_b, alpha_b, beta_b) and nodes t_a,
//   shape  = alpha_u
//   rate   = beta_u beta_b / t_a
//   eps    = (w_u beta_u^alpha_u / Gamma(alpha_u))
//          * (w_b beta_b^alpha_u / Gamma(alpha_b))
//          * w_a t_a^(alpha_b - alpha_u - 1)
//   weight = eps * Gamma(alpha_u) t_a^alpha_u / (beta_u^alpha_u beta_b^alpha_u)
// over the index set {1<=u<=U, 1<=b<=B, 1<=a<=A}.
// ------------------------------------------------------------------------

struct CascadedMGComponent
{
    double weight;  // w-hat
    double shape;   // alpha-hat = alpha_u
    double rate;    // beta-hat = beta_u beta_b / t_a
    double log_eps; // log of eps-hat, kept in log space for large shapes
};

struct CascadedMGParams
{
    std::vector<CascadedMGComponent> components;
    std::size_t first_count = 0;  // U
    std::size_t second_count = 0; // B
    int quadrature_order = 0;     // A

    // Weights are deliberately NOT renormalized: the residual of
    // weight_sum() from 1 is the observable quadrature error.
    double weight_sum() const
    {
        double s = 0.0;
        for (const auto &c : components)
            s += c.weight;
        return s;
    }
};

inline CascadedMGParams mg_product(const MGParams &first, const MGParams &second,
                                   const GaussLaguerreRule &rule)
{
    first.validate();
    second.validate();
    if (rule.order < 1 || rule.nodes.size() != static_cast<std::size_t>(rule.order))
        throw validation_error("mg_product: invalid quadrature rule");

    CascadedMGParams out;
    out.first_count = first.count();
    out.second_count = second.count();
    out.quadrature_order = rule.order;
    out.components.reserve(first.count() * second.count() * rule.nodes.size());

    for (const auto &u : first.components)
        for (const auto &b : second.components)
            for (int a = 0; a < rule.order; ++a)
            {
                const double t = rule.nodes[a];
                const double lt = std::log(t);
                CascadedMGComponent c;
                c.shape = u.shape;
                c.rate = u.rate * b.rate / t;
                c.log_eps = std::log(u.weight) + u.shape * std::log(u.rate) - std::lgamma(u.shape) +
                            std::log(b.weight) + u.shape * std::log(b.rate) - std::lgamma(b.shape) +
                            std::log(rule.weights[a]) + (b.shape - u.shape - 1.0) * lt;
                c.weight = std::exp(c.log_eps + std::lgamma(u.shape) +
                                    u.shape * (lt - std::log(u.rate) - std::log(b.rate)));
                out.components.push_back(c);
            }
    return out;
}

// Density of the cascaded mixture, sum eps-hat x^(shape-1) e^(-rate x).
inline double cascaded_mg_pdf(const CascadedMGParams &params, double x)
{
    if (x < 0.0)
        throw std::domain_error("cascaded_mg_pdf: x must be nonnegative");
    if (x == 0.0)
    {
        double v = 0.0;
        for (const auto &c : params.components)
        {
            if (c.shape < 1.0)
                return std::numeric_limits<double>::infinity();
            if (c.shape == 1.0)
                v += std::exp(c.log_eps);
        }
        return v;
    }
    const double lx = std::log(x);
    double v = 0.0;
    for (const auto &c : params.components)
        v += std::exp(c.log_eps + (c.shape - 1.0) * lx - c.rate * x);
    return v;
}

// Cascaded mean and variance as the triple sums
//   E[c]   = sum w-hat shape/rate
//   var(c) = sum w-hat (shape/rate^2 + (shape/rate - E[c])^2)
// (shape/rate = alpha_u t_a / (beta_u beta_b), so these are exactly the
// mixture-moment formulas applied to the product components).
inline Moments mg_cascaded_moments(const CascadedMGParams &params)
{
    if (params.components.empty())
        throw validation_error("mg_cascaded_moments: empty cascaded parameters");
    double mean = 0.0;
    for (const auto &c : params.components)
        mean += c.weight * c.shape / c.rate;
    double var = 0.0;
    for (const auto &c : params.components)
    {
        const double m = c.shape / c.rate;
        var += c.weight * (c.shape / (c.rate * c.rate) + (m - mean) * (m - mean));
    }
    return {mean, var};
}

} // namespace riscade
