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

#include "glqvbce/von_mises.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace glqvbce
{
    double wrap_to_pi(double angle)
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double w = std::fmod(angle + std::numbers::pi, two_pi);
        if (w < 0.0)
            w += two_pi;
        w -= std::numbers::pi;
        if (w >= std::numbers::pi) // fmod rounding can land exactly on +pi
            w -= two_pi;
        return w;
    }

    // Hankel expansion of I_nu(x) * sqrt(2 pi x) * exp(-x); valid for x >> nu^2 and x > 700
    static double hankel_series(double nu, double x)
    {
        const double mu = 4.0 * nu * nu;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 64; ++k)
        {
            const double odd = 2.0 * k - 1.0;
            const double next = -term * (mu - odd * odd) / (k * 8.0 * x);
            if (std::abs(next) > std::abs(term) && k > 2) // series starts diverging
                break;
            term = next;
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum))
                break;
        }
        return sum;
    }

    arma::vec bessel_ratios(double kappa, arma::uword max_order)
    {
        if (!(kappa >= 0.0) || !std::isfinite(kappa))
            throw std::domain_error("bessel_ratios: concentration must be finite and non-negative.");

        arma::vec r(max_order + 1, arma::fill::zeros);
        r(0) = 1.0;
        if (max_order == 0 || kappa == 0.0)
            return r;

        const double top = double(max_order);
        if (kappa > 700.0 && kappa > 32.0 * top * top)
        {
            const double s0 = hankel_series(0.0, kappa);
            for (arma::uword m = 1; m <= max_order; ++m)
                r(m) = hankel_series(double(m), kappa) / s0;
            return r;
        }

        // q_m = I_m / I_{m-1} = 1 / (2m/kappa + q_{m+1}), started far enough above max_order that
        // the minimal-solution error has decayed below double precision
        const arma::uword start = max_order + 32 + arma::uword(std::ceil(std::sqrt(40.0 * kappa)));
        double q = 0.0;
        arma::vec ratio(max_order + 1, arma::fill::zeros);
        for (arma::uword m = start; m >= 1; --m)
        {
            q = 1.0 / (2.0 * double(m) / kappa + q);
            if (m <= max_order)
                ratio(m) = q;
        }
        for (arma::uword m = 1; m <= max_order; ++m)
            r(m) = r(m - 1) * ratio(m);
        return r;
    }

    double bessel_ratio(double kappa, int m)
    {
        const arma::uword order = arma::uword(std::abs(m));
        return bessel_ratios(kappa, order)(order);
    }
}
