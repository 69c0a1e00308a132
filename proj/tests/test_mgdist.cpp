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

#include <catch2/catch_amalgamated.hpp>

#include "riscade/mgdist.hpp"
#include "test_support.hpp"

#include <cmath>
#include <limits>

using namespace riscade;

namespace
{
// Two-component mixture used across the PDF/moment/sampling tests:
// w = [0.5, 0.5], alpha = [1, 2], beta = [1, 1].
MGParams two_component_example()
{
    return MGParams{{{0.5, 1.0, 1.0}, {0.5, 2.0, 1.0}}};
}
} // namespace

TEST_CASE("mg_pdf hand-evaluated values and edge cases")
{
    // Exponential density at zero: f(0) = beta = 1.
    CHECK(mg_pdf(MGParams::single(1.0, 1.0), 0.0) == Catch::Approx(1.0).margin(1e-15));

    // alpha = 2: the x^(alpha-1) factor vanishes at the origin.
    CHECK(mg_pdf(MGParams::single(2.0, 3.0), 0.0) == 0.0);

    // Term-by-term: 0.5 e^-1 + 0.5 * 1 * e^-1 = e^-1.
    CHECK(mg_pdf(two_component_example(), 1.0) == Catch::Approx(std::exp(-1.0)).epsilon(1e-12));

    // alpha < 1 is unbounded at the origin.
    CHECK(std::isinf(mg_pdf(MGParams::single(0.7, 1.0), 0.0)));

    CHECK_THROWS_AS(mg_pdf(MGParams::single(1.0, 1.0), -0.1), std::domain_error);
    CHECK_THROWS_AS(mg_pdf(MGParams{{{0.5, 1.0, 1.0}, {0.6, 2.0, 1.0}}}, 1.0), validation_error);
    CHECK_THROWS_AS(mg_pdf(MGParams::single(-1.0, 1.0), 1.0), validation_error);
    CHECK_THROWS_AS(mg_pdf(MGParams{}, 1.0), validation_error);
}

TEST_CASE("mg_pdf integrates to one")
{
    const MGParams cases[] = {
        MGParams::single(1.0, 1.0),
        MGParams::single(0.5, 2.0),
        two_component_example(),
        MGParams{{{0.25, 0.8, 0.5}, {0.25, 2.0, 1.0}, {0.25, 3.5, 2.0}, {0.25, 6.0, 4.0}}},
    };
    for (const auto &p : cases)
        CHECK(oracle::mg_moment_numeric(p, 0) == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("mg_moments closed forms")
{
    const auto single = mg_moments(MGParams::single(2.0, 3.0));
    CHECK(single.mean == Catch::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(single.variance == Catch::Approx(2.0 / 9.0).epsilon(1e-14));

    // w = [0.5, 0.5], alpha = [1, 4], beta = [1, 2]: mean = 0.5*1 + 0.5*2.
    const MGParams mixed{{{0.5, 1.0, 1.0}, {0.5, 4.0, 2.0}}};
    const auto m = mg_moments(mixed);
    CHECK(m.mean == Catch::Approx(1.5).epsilon(1e-14));
    // Variance frozen from the numerical-integration oracle:
    // E[X^2] = 0.5*2 + 0.5*5 = 3.5, so var = 3.5 - 1.5^2 = 1.25.
    const double m1 = oracle::mg_moment_numeric(mixed, 1);
    const double m2 = oracle::mg_moment_numeric(mixed, 2);
    CHECK(m1 == Catch::Approx(1.5).epsilon(1e-10));
    CHECK(m2 - m1 * m1 == Catch::Approx(1.25).epsilon(1e-9));
    CHECK(m.variance == Catch::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("mg_moments agrees with integrated moments")
{
    const MGParams cases[] = {
        MGParams::single(0.6, 1.3),
        two_component_example(),
        MGParams{{{0.2, 1.5, 0.7}, {0.3, 2.5, 1.9}, {0.5, 5.0, 3.1}}},
        MGParams{{{0.25, 0.8, 0.5}, {0.25, 2.0, 1.0}, {0.25, 3.5, 2.0}, {0.25, 6.0, 4.0}}},
    };
    for (const auto &p : cases)
    {
        const auto m = mg_moments(p);
        const double m1 = oracle::mg_moment_numeric(p, 1);
        const double m2 = oracle::mg_moment_numeric(p, 2);
        CHECK(m.mean == Catch::Approx(m1).epsilon(1e-8));
        CHECK(m.variance == Catch::Approx(m2 - m1 * m1).epsilon(1e-8));
        CHECK(m.variance >= 0.0);
        CHECK(mg_second_moment(p) == Catch::Approx(m2).epsilon(1e-8));
    }
}

TEST_CASE("mg_sample mean, support and determinism")
{
    const MGParams expo = MGParams::single(1.0, 1.0);
    auto rng = make_stream(20260314, 1);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double x = mg_sample(expo, rng);
        REQUIRE(x >= 0.0);
        sum += x;
    }
    // CLT bound: mean 1, sigma 1, three standard errors.
    CHECK(std::abs(sum / n - 1.0) < 3.0 / std::sqrt(static_cast<double>(n)));

    auto rng_a = make_stream(7, 2);
    auto rng_b = make_stream(7, 2);
    for (int i = 0; i < 32; ++i)
        CHECK(mg_sample(two_component_example(), rng_a) ==
              mg_sample(two_component_example(), rng_b));
}

TEST_CASE("mg_sample goodness of fit")
{
    const MGParams params = two_component_example();
    auto rng = make_stream(20260314, 3);
    std::vector<double> samples(100000);
    for (auto &s : samples)
        s = mg_sample(params, rng);

    const int bins = 50;
    const double stat = oracle::chi_squared_statistic(samples, params, bins);
    CHECK(stat < oracle::chi_squared_quantile(bins - 1, 0.99));
}

TEST_CASE("gauss_laguerre_rule small orders")
{
    // L_1(t) = 1 - t: single node at 1, unit weight.
    const auto r1 = gauss_laguerre_rule(1);
    REQUIRE(r1.nodes.size() == 1);
    CHECK(r1.nodes[0] == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(r1.weights[0] == Catch::Approx(1.0).epsilon(1e-13));

    // L_2(t) = 1 - 2t + t^2/2 has roots 2 +- sqrt(2).
    const auto r2 = gauss_laguerre_rule(2);
    REQUIRE(r2.nodes.size() == 2);
    CHECK(r2.nodes[0] == Catch::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r2.nodes[1] == Catch::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(gauss_laguerre_rule(0), validation_error);
    CHECK_THROWS_AS(gauss_laguerre_rule(129), validation_error);
}

TEST_CASE("gauss_laguerre_rule weights sum to one and integrate polynomials")
{
    for (int order : {1, 2, 5, 12, 30, 40, 64, 128})
    {
        const auto rule = gauss_laguerre_rule(order);
        double wsum = 0.0;
        for (std::size_t i = 0; i < rule.weights.size(); ++i)
        {
            CHECK(rule.nodes[i] > 0.0);
            CHECK(rule.weights[i] > 0.0);
            if (i > 0)
                CHECK(rule.nodes[i] > rule.nodes[i - 1]);
            wsum += rule.weights[i];
        }
        CHECK(wsum == Catch::Approx(1.0).margin(1e-10));
    }

    // int_0^inf t^k e^-t dt = k!; exact for degree <= 2A-1.
    const auto rule = gauss_laguerre_rule(8);
    double factorial = 1.0;
    for (int k = 0; k <= 5; ++k)
    {
        if (k > 0)
            factorial *= k;
        double q = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            q += rule.weights[i] * std::pow(rule.nodes[i], k);
        CHECK(q == Catch::Approx(factorial).epsilon(1e-12));
    }
}

TEST_CASE("mg_product of two exponentials converges to the Bessel K0 density")
{
    // Exact product-of-exponentials density: 2 K0(2 sqrt(x)). Convergence of
    // the quadrature mixture toward it is slow and oscillatory near the
    // origin (the inner integrand has an essential singularity at t = 0), so
    // the tightest checks sit away from it; the small-x behavior at fixed
    // order is pinned by the acceptance suite.
    const MGParams expo = MGParams::single(1.0, 1.0);

    const auto at40 = mg_product(expo, expo, gauss_laguerre_rule(40));
    for (double x : {1.0, 2.0})
    {
        const double exact = 2.0 * oracle::bessel_k0_integral(2.0 * std::sqrt(x));
        CHECK(cascaded_mg_pdf(at40, x) == Catch::Approx(exact).margin(1e-3));
    }

    const auto at103 = mg_product(expo, expo, gauss_laguerre_rule(103));
    for (double x : {0.1, 0.5, 1.0, 2.0})
    {
        const double exact = 2.0 * oracle::bessel_k0_integral(2.0 * std::sqrt(x));
        CHECK(cascaded_mg_pdf(at103, x) == Catch::Approx(exact).margin(2e-4));
    }

    const auto at30 = mg_product(expo, expo, gauss_laguerre_rule(30));
    CHECK(at30.weight_sum() == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("mg_product cascaded mean equals the product of factor means")
{
    const MGParams first{{{0.4, 1.3, 0.9}, {0.6, 3.2, 2.1}}};
    const MGParams second{{{1.0, 2.4, 1.7}}};
    const auto cascaded = mg_product(first, second, gauss_laguerre_rule(30));
    const auto moments = mg_cascaded_moments(cascaded);
    const double expected = mg_moments(first).mean * mg_moments(second).mean;
    CHECK(moments.mean == Catch::Approx(expected).epsilon(1e-3));
}

TEST_CASE("mg_product normalization error does not grow with quadrature order")
{
    const MGParams expo = MGParams::single(1.0, 1.0);
    const MGParams fractional = MGParams::single(0.7, 1.0);
    for (const auto &pair : {std::pair{expo, expo}, std::pair{expo, fractional}})
    {
        double prev = std::numeric_limits<double>::infinity();
        for (int order : {5, 10, 20, 40})
        {
            const auto c = mg_product(pair.first, pair.second, gauss_laguerre_rule(order));
            const double err = std::abs(c.weight_sum() - 1.0);
            CHECK(err <= prev + 1e-12); // non-strict, with roundoff slack
            prev = err;
        }
    }
}

TEST_CASE("mg_cascaded_moments for exponential factors")
{
    const MGParams expo = MGParams::single(1.0, 1.0);
    const auto cascaded = mg_product(expo, expo, gauss_laguerre_rule(40));
    const auto m = mg_cascaded_moments(cascaded);

    // Independence: E[XY] = 1, E[(XY)^2] = E[X^2] E[Y^2] = 4.
    CHECK(m.mean == Catch::Approx(1.0).margin(1e-3));
    CHECK(m.variance + m.mean * m.mean == Catch::Approx(4.0).margin(1e-3));
}

TEST_CASE("mg_product degenerate factor limit")
{
    // First factor concentrates at 1 (huge shape), so the product's variance
    // collapses to the second factor's, checked against the independent
    // per-factor integration oracle E[(XY)^k] = E[X^k] E[Y^k].
    const MGParams spike = MGParams::single(1e4, 1e4);
    const MGParams expo = MGParams::single(1.0, 1.0);
    const auto cascaded = mg_product(spike, expo, gauss_laguerre_rule(40));
    const auto m = mg_cascaded_moments(cascaded);

    const double x1 = oracle::mg_moment_numeric(spike, 1), x2 = oracle::mg_moment_numeric(spike, 2);
    const double y1 = oracle::mg_moment_numeric(expo, 1), y2 = oracle::mg_moment_numeric(expo, 2);
    const double mean_oracle = x1 * y1;
    const double var_oracle = x2 * y2 - mean_oracle * mean_oracle;

    CHECK(m.mean == Catch::Approx(mean_oracle).epsilon(1e-3));
    CHECK(m.variance == Catch::Approx(var_oracle).epsilon(1e-3));
    CHECK(cascaded.components.size() == 40);
}

TEST_CASE("single-component reductions of familiar laws")
{
    // alpha = 1, beta = 1/omega is the exponential law, i.e. Rayleigh fading
    // power with mean omega; alpha = m, beta = m/omega is Nakagami-m power.
    const double omega = 2.5;
    const MGParams rayleigh_power = MGParams::single(1.0, 1.0 / omega);
    for (double x : {0.0, 0.3, 1.0, 4.0})
        CHECK(mg_pdf(rayleigh_power, x) ==
              Catch::Approx(std::exp(-x / omega) / omega).epsilon(1e-12));
    const auto m = mg_moments(rayleigh_power);
    CHECK(m.mean == Catch::Approx(omega).epsilon(1e-14));
    CHECK(m.variance == Catch::Approx(omega * omega).epsilon(1e-14));

    const double nak_m = 3.0;
    const MGParams nakagami = MGParams::single(nak_m, nak_m / omega);
    const auto nm = mg_moments(nakagami);
    CHECK(nm.mean == Catch::Approx(omega).epsilon(1e-14));
    CHECK(nm.variance == Catch::Approx(omega * omega / nak_m).epsilon(1e-14));
}
