// SPDX-License-Identifier: Apache-2.0
//
// glqvbce - gridless quantized variational Bayesian channel estimation
// Copyright (C) 2026 The glqvbce authors
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

#include "catch_amalgamated.hpp"
#include "glqvbce/von_mises.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>

using namespace glqvbce;

TEST_CASE("bessel_ratios matches Boost for moderate kappa")
{
    for (double kappa : {1e-6, 1e-3, 0.1, 0.5, 1.0, 3.0, 10.0, 47.5, 150.0, 400.0, 699.0})
    {
        const arma::vec r = bessel_ratios(kappa, 64);
        const double i0 = boost::math::cyl_bessel_i(0, kappa);
        for (int m = 0; m <= 64; ++m)
        {
            const double ref = boost::math::cyl_bessel_i(m, kappa) / i0;
            if (ref < 1e-280)
                continue;
            INFO("kappa = " << kappa << ", m = " << m);
            CHECK(std::abs(r(m) - ref) <= 1e-12 * ref);
        }
    }
}

TEST_CASE("bessel_ratios satisfies the three-term recurrence for large kappa")
{
    // I_{m-1} - I_{m+1} = (2m / kappa) I_m
    for (double kappa : {700.5, 1000.0, 5000.0, 1e5, 1e7})
    {
        const arma::vec r = bessel_ratios(kappa, 65);
        for (int m = 1; m <= 64; ++m)
        {
            const double lhs = r(m - 1) - r(m + 1);
            const double rhs = 2.0 * m / kappa * r(m);
            INFO("kappa = " << kappa << ", m = " << m);
            CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(rhs, 1e-300) + 1e-15);
        }
        CHECK(r(0) == 1.0);
        CHECK(r(1) < 1.0);
        CHECK(r(1) > 0.0);
    }
}

TEST_CASE("bessel_ratios edge cases")
{
    const arma::vec z = bessel_ratios(0.0, 5);
    CHECK(z(0) == 1.0);
    CHECK(arma::all(z.subvec(1, 5) == 0.0));
    CHECK_THROWS_AS(bessel_ratios(-1.0, 3), std::domain_error);

    // ratios decrease in m and approach 1 as kappa grows
    const arma::vec r = bessel_ratios(25.0, 40);
    for (int m = 1; m <= 40; ++m)
        CHECK(r(m) < r(m - 1));
    CHECK(bessel_ratio(1e6, 1) == Catch::Approx(1.0 - 0.5e-6).epsilon(1e-9));
    CHECK(bessel_ratio(3.0, -2) == bessel_ratio(3.0, 2));
}

TEST_CASE("branches agree across the asymptotic switch")
{
    // at kappa = 3000 the series is taken for max_order 8 (3000 > 32 * 8^2) but not for 10
    const arma::vec series = bessel_ratios(3000.0, 8);
    const arma::vec recur = bessel_ratios(3000.0, 10);
    for (int m = 0; m <= 8; ++m)
        CHECK(std::abs(series(m) - recur(m)) <= 1e-13 * recur(m));
}

TEST_CASE("wrap_to_pi")
{
    using std::numbers::pi;
    CHECK(wrap_to_pi(0.0) == 0.0);
    CHECK(wrap_to_pi(pi) == Catch::Approx(-pi));
    CHECK(wrap_to_pi(-pi) == Catch::Approx(-pi));
    CHECK(wrap_to_pi(3.0 * pi + 0.25) == Catch::Approx(-pi + 0.25));
    for (double a = -20.0; a < 20.0; a += 0.37)
    {
        const double w = wrap_to_pi(a);
        CHECK(w >= -pi);
        CHECK(w < pi);
        CHECK(std::abs(std::remainder(w - a, 2.0 * pi)) < 1e-12);
    }
}
