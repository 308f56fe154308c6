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
#include "glqvbce/mmse_module.hpp"
#include "glqvbce/normal.hpp"
#include "oracles.hpp"

#include <cmath>
#include <limits>

using namespace glqvbce;

namespace
{
    const double inf = std::numeric_limits<double>::infinity();
}

TEST_CASE("normal helpers")
{
    CHECK(normal::cdf(0.0) == 0.5);
    CHECK(normal::pdf(0.0) == Catch::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)));
    for (double x : {-40.0, -20.0, -8.5, -8.0, -7.9, -3.0, 0.0, 2.0, 9.0})
    {
        // log(0.5 erfc(-x / sqrt 2)) with the asymptotic tail of erfc as reference below -25
        const double ref = x > -25.0 ? std::log(oracle::phi_cdf(x))
                                     : -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) +
                                           std::log1p(-1.0 / (x * x) + 3.0 / std::pow(x, 4) - 15.0 / std::pow(x, 6));
        INFO("x = " << x);
        CHECK(normal::log_cdf(x) == Catch::Approx(ref).epsilon(1e-12).margin(1e-15));
    }
    CHECK(std::isfinite(normal::log_cdf(-1e4)));
}

TEST_CASE("truncated standard normal moments")
{
    for (auto [lo, hi] : {std::pair{-inf, 0.0}, {0.0, inf}, {-1.0, 0.5}, {2.0, 2.5}, {-7.0, -6.0}, {12.0, inf},
                          {-inf, -30.0}, {-0.3, 0.3}, {-inf, inf}})
    {
        const auto ref = oracle::interval_posterior(0.0, 1.0, 0.0, lo, hi);
        const normal::Truncated t = normal::truncated(lo, hi);
        INFO("cell [" << lo << ", " << hi << ")");
        CHECK(t.mean == Catch::Approx(ref.mean).epsilon(1e-8).margin(1e-12));
        CHECK(t.var == Catch::Approx(ref.var).epsilon(1e-7).margin(1e-12));
        CHECK(t.mean >= lo);
        CHECK(t.mean <= hi);
    }
    const normal::Truncated w = normal::truncated(-inf, inf);
    CHECK(w.log_mass == 0.0);
    CHECK(w.var == 1.0);
    // a very narrow cell keeps the uniform variance w^2 / 12
    const normal::Truncated n = normal::truncated(0.3, 0.3 + 1e-6);
    CHECK(n.var == Catch::Approx(1e-12 / 12.0).epsilon(1e-3));
}

TEST_CASE("one-bit posterior mean from the quantized prior example")
{
    // CN(0, 1) prior on z, no noise, positive real part: E[Re z] = 1 / sqrt(pi)
    const ScalarMoments s = interval_posterior(0.0, 0.5, 0.0, 0.0, inf);
    CHECK(s.mean == Catch::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-12));
    CHECK(s.var == Catch::Approx(0.5 * (1.0 - 2.0 / std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("interval posterior matches quadrature")
{
    for (int B : {1, 2, 3})
    {
        const QuantizerSpec q = B == 1 ? QuantizerSpec::one_bit() : QuantizerSpec::uniform(B, 1.0);
        for (double m : {-2.0, -0.4, 0.0, 0.7, 3.0})
            for (double v : {0.05, 0.5, 2.0})
                for (double nv : {0.01, 0.25, 1.0})
                    for (int b = 0; b < q.cells(); ++b)
                    {
                        const auto [lo, hi] = q.interval_of(b);
                        const auto ref = oracle::interval_posterior(m, v, nv, lo, hi);
                        const ScalarMoments s = interval_posterior(m, v, nv, lo, hi);
                        INFO("B=" << B << " m=" << m << " v=" << v << " nv=" << nv << " cell=" << b);
                        CHECK(std::abs(s.mean - ref.mean) <= 1e-7 * std::max(std::abs(ref.mean), std::sqrt(v)));
                        CHECK(std::abs(s.var - ref.var) <= 1e-7 * ref.var);
                        CHECK(s.var <= v);
                    }
    }
}

TEST_CASE("tail cells stay finite")
{
    const ScalarMoments s = interval_posterior(0.0, 1e-4, 1e-6, 50.0, inf);
    CHECK(std::isfinite(s.mean));
    CHECK(std::isfinite(s.var));
    CHECK(s.var > 0.0);
    CHECK(s.mean > 0.0);
    const ScalarMoments t = interval_posterior(5.0, 1.0, 0.001, -inf, -30.0);
    CHECK(std::isfinite(t.mean));
    CHECK(t.mean < -29.0);
}

TEST_CASE("componentwise module: serial equals parallel, identity equals Gaussian")
{
    Rng rng(11);
    const arma::uword n = 300;
    GaussianMessage cav{complex_normal(n, 1.0, rng), arma::randu<arma::vec>(n) + 0.1};
    const arma::cx_vec y = complex_normal(n, 1.3, rng);
    const Observation obs = Observation::quantized(QuantizerSpec::uniform(3, 1.0), y, 0.3);
    const GaussianMessage s = quantized_posterior_moments(cav, obs, Exec::serial);
    const GaussianMessage p = quantized_posterior_moments(cav, obs, Exec::parallel);
    CHECK(arma::all(arma::real(s.mean) == arma::real(p.mean)));
    CHECK(arma::all(arma::imag(s.mean) == arma::imag(p.mean)));
    CHECK(arma::all(s.var == p.var));

    const Observation raw = Observation::unquantized(y, 0.3);
    const GaussianMessage a = quantized_posterior_moments(cav, raw);
    const GaussianMessage g = gaussian_posterior_moments(cav, y, 0.3);
    CHECK(arma::all(a.var == g.var));
    CHECK(arma::norm(a.mean - g.mean) == 0.0);
    // Gaussian product by hand
    for (arma::uword i = 0; i < 5; ++i)
    {
        const double v = 1.0 / (1.0 / cav.var(i) + 1.0 / 0.3);
        CHECK(g.var(i) == Catch::Approx(v));
        CHECK(std::abs(g.mean(i) - v * (cav.mean(i) / cav.var(i) + y(i) / 0.3)) < 1e-12);
    }
}

TEST_CASE("observation validation")
{
    CHECK_THROWS(Observation::unquantized(arma::cx_vec{{1.0, 0.0}}, -1.0));
    QuantizedSamples bad;
    bad.re = {0, 5};
    bad.im = {0, 0};
    CHECK_THROWS(Observation::from_codes(QuantizerSpec::one_bit(), bad, 1.0));
    GaussianMessage cav = GaussianMessage::flat(3, 1.0);
    const Observation obs = Observation::unquantized(arma::cx_vec(2, arma::fill::zeros), 1.0);
    CHECK_THROWS(quantized_posterior_moments(cav, obs));
}
