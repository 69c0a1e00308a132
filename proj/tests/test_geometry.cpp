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

#include "riscade/geometry.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace riscade;

TEST_CASE("ULA element positions and index range")
{
    const UlaGeometry odd{5, 0.01};
    CHECK(odd.index_min() == -2);
    CHECK(odd.index_max() == 2);
    CHECK(odd.position(0).isZero()); // index 0 is the origin for odd counts

    // Even count: -ceil((N-1)/2) .. floor((N-1)/2) is asymmetric.
    const UlaGeometry even{4, 0.01};
    CHECK(even.index_min() == -2);
    CHECK(even.index_max() == 1);

    const UlaGeometry geom{8, 0.0015};
    for (int i = 0; i < geom.element_count; ++i)
    {
        const int k = geom.index_of(i);
        CHECK(geom.position(k).x() == 0.0);
        CHECK(geom.position(k).y() == k * geom.spacing);
        CHECK(geom.position(k).z() == 0.0);
    }

    CHECK_THROWS_AS((UlaGeometry{0, 0.01}.validate()), validation_error);
    CHECK_THROWS_AS((UlaGeometry{4, 0.0}.validate()), validation_error);
}

TEST_CASE("UE placement")
{
    const UePlacement ue{2.0, 0.6};
    const auto p = ue.position();
    CHECK(p.x() == Catch::Approx(2.0 * std::cos(0.6)));
    CHECK(p.y() == Catch::Approx(2.0 * std::sin(0.6)));
    CHECK(p.z() == 0.0);
    CHECK_THROWS_AS((UePlacement{2.0, 2.0}.validate()), validation_error);
    CHECK_THROWS_AS((UePlacement{0.0, 0.0}.validate()), validation_error);
}

TEST_CASE("ring_scatterer_distance")
{
    ClusterRing ring;
    ring.center_distance = 10.0;
    ring.center_angle = 0.3;
    ring.radius = 0.0;
    // Zero radius, reference element: plain center distance.
    CHECK(ring_scatterer_distance(ring, 0.7, 0, 0.001) == Catch::Approx(10.0).epsilon(1e-14));

    // Collinear geometry: theta = phi puts the scatterer at D + r.
    ring.radius = 1.8;
    CHECK(ring_scatterer_distance(ring, ring.center_angle, 0, 0.001) ==
          Catch::Approx(10.0 + 1.8).epsilon(1e-14));

    // Coordinate oracle: build both points explicitly and take the norm.
    const double wavelength = riscade::speed_of_light / 142e9;
    const double delta = wavelength / 2.0;
    const double theta = 1.1;
    const int q = 5;
    const Eigen::Vector2d scatterer = ring.scatterer_position(theta);
    const Eigen::Vector2d element(0.0, q * delta);
    CHECK(ring_scatterer_distance(ring, theta, q, delta) ==
          Catch::Approx((scatterer - element).norm()).epsilon(1e-14));
}

TEST_CASE("ring validation")
{
    ClusterRing ring;
    ring.center_distance = 2.0;
    ring.radius = 0.5;
    ring.power_fraction = 1.0;
    ring.scatterer_count = 8;
    const ClusterRing rings_ok[] = {ring};
    CHECK_NOTHROW(validate_rings(rings_ok));

    ClusterRing enclosing = ring;
    enclosing.radius = 2.5; // would wrap around the array origin
    const ClusterRing rings_bad[] = {enclosing};
    CHECK_THROWS_AS(validate_rings(rings_bad), validation_error);
    CHECK_NOTHROW(validate_rings(rings_bad, /*require_origin_free=*/false));

    ClusterRing half = ring;
    half.power_fraction = 0.5;
    const ClusterRing rings_sum[] = {half};
    CHECK_THROWS_MATCHES(validate_rings(rings_sum), validation_error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("eps")));

    // All distances strictly positive for a valid ring.
    for (double theta = -pi; theta < pi; theta += 0.1)
        CHECK(ring_scatterer_distance(ring, theta, -4, 0.01) > 0.0);
}

TEST_CASE("farfield_distance_sum")
{
    ClusterRing ring;
    ring.center_distance = 100.0;
    ring.center_angle = 0.3;
    ring.radius = 1.0;

    const double wavelength = riscade::speed_of_light / 142e9;
    const double delta = wavelength / 2.0;

    // q = p = 0: only the leading 2 d0 term.
    const double d0 = std::sqrt(ring.center_distance * ring.center_distance + 1.0 +
                                2.0 * ring.center_distance * std::cos(ring.center_angle - 0.9));
    CHECK(farfield_distance_sum(ring, 0.9, 0, 0, delta) == Catch::Approx(2.0 * d0).epsilon(1e-14));

    // Far ring: the expansion tracks the exact pairwise sum.
    for (int q = -8; q <= 8; ++q)
        for (int p = -8; p <= 8; ++p)
        {
            if (std::abs(q - p) > 8)
                continue;
            const double exact = ring_scatterer_distance(ring, 0.9, q, delta) +
                                 ring_scatterer_distance(ring, 0.9, p, delta);
            CHECK(farfield_distance_sum(ring, 0.9, q, p, delta) ==
                  Catch::Approx(exact).epsilon(1e-4));
        }

    // The correction term carries the (q - p) factor: antisymmetric in swap.
    const double base = farfield_distance_sum(ring, 0.9, 0, 0, delta);
    const double corr_qp = farfield_distance_sum(ring, 0.9, 6, 2, delta) - base;
    const double corr_pq = farfield_distance_sum(ring, 0.9, 2, 6, delta) - base;
    CHECK(corr_qp == Catch::Approx(-corr_pq).epsilon(1e-12));
}

TEST_CASE("draw_scatterers angle law")
{
    ClusterRing ring;
    ring.center_distance = 2.0;
    ring.radius = 0.5;
    ring.power_fraction = 1.0;
    ring.scatterer_count = 100000;

    auto unit_magnitude = [](RngStream &) { return 1.0; };

    SECTION("kappa = 0 is uniform on the circle")
    {
        ring.vm_concentration = 0.0;
        auto rng = make_stream(99, 4);
        const auto draws = draw_scatterers(ring, unit_magnitude, rng);

        const int bins = 36;
        std::vector<double> counts(bins, 0.0);
        for (const auto &d : draws)
        {
            REQUIRE(d.angle >= -pi);
            REQUIRE(d.angle < pi);
            REQUIRE(d.phase >= -pi);
            REQUIRE(d.phase < pi);
            counts[static_cast<std::size_t>((d.angle + pi) / (2.0 * pi) * bins)] += 1.0;
        }
        const double expected = static_cast<double>(draws.size()) / bins;
        double stat = 0.0;
        for (double c : counts)
            stat += (c - expected) * (c - expected) / expected;
        CHECK(stat < oracle::chi_squared_quantile(bins - 1, 0.99));
    }

    SECTION("concentrated draws have the requested circular mean")
    {
        ring.vm_concentration = 50.0;
        ring.vm_mean = 0.5;
        auto rng = make_stream(99, 5);
        const auto draws = draw_scatterers(ring, unit_magnitude, rng);
        double s = 0.0, c = 0.0;
        for (const auto &d : draws)
        {
            s += std::sin(d.angle);
            c += std::cos(d.angle);
        }
        CHECK(std::abs(wrap_angle(std::atan2(s, c) - 0.5)) < 0.02);
    }

    SECTION("fixed seed reproduces the draw sequence")
    {
        ring.vm_concentration = 3.0;
        ring.scatterer_count = 64;
        auto rng_a = make_stream(5, 6);
        auto rng_b = make_stream(5, 6);
        const MGParams law = MGParams::single(1.0, 1.0);
        auto mag = [&law](RngStream &r) { return mg_sample(law, r); };
        const auto a = draw_scatterers(ring, mag, rng_a);
        const auto b = draw_scatterers(ring, mag, rng_b);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            CHECK(a[i].angle == b[i].angle);
            CHECK(a[i].phase == b[i].phase);
            CHECK(a[i].magnitude == b[i].magnitude);
        }
    }
}
