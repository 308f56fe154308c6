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

#include "glqvbce/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace glqvbce::normal
{
    namespace
    {
        constexpr double inf = std::numeric_limits<double>::infinity();
        constexpr double log_sqrt_2pi = 0.91893853320467274178;

        // (1 - Phi(t)) / phi(t) for t >= 8, Lentz evaluation of t + 1/(t + 2/(t + 3/(t + ...)))
        double mills_ratio(double t)
        {
            constexpr double tiny = 1e-300;
            double f = t, c = t, d = 0.0;
            for (int k = 1; k < 500; ++k)
            {
                d = t + k * d;
                d = (std::abs(d) < tiny) ? tiny : d;
                c = t + k / c;
                c = (std::abs(c) < tiny) ? tiny : c;
                d = 1.0 / d;
                const double delta = c * d;
                f *= delta;
                if (std::abs(delta - 1.0) < 1e-16)
                    break;
            }
            return 1.0 / f;
        }

        // x * phi(x) / Z with the x = +-inf limit taken as 0
        double scaled_edge(double x, double log_phi_minus_log_z)
        {
            if (std::isinf(x))
                return 0.0;
            return x * std::exp(log_phi_minus_log_z);
        }
    }

    double pdf(double x) { return std::exp(log_pdf(x)); }

    double log_pdf(double x) { return -0.5 * x * x - log_sqrt_2pi; }

    double cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

    double log_cdf(double x)
    {
        if (x == -inf)
            return -inf;
        if (x < -8.0)
            return log_pdf(x) + std::log(mills_ratio(-x));
        if (x > 5.0)
            return std::log1p(-0.5 * std::erfc(x * std::numbers::sqrt2 / 2.0));
        return std::log(cdf(x));
    }

    namespace
    {
        // 8-point Gauss-Legendre on [-1, 1]
        constexpr double gl_x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
        constexpr double gl_w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

        // Standard normal restricted to [c - h, c + h] with small h, moments taken in t = x - c
        Truncated narrow_cell(double c, double h)
        {
            double z = 0.0, m1 = 0.0;
            double f[8], t[8], wt[8];
            for (int k = 0; k < 8; ++k)
            {
                t[k] = (k < 4 ? -gl_x[k] : gl_x[k - 4]) * h;
                wt[k] = (k < 4 ? gl_w[k] : gl_w[k - 4]) * h;
                f[k] = std::exp(-c * t[k] - 0.5 * t[k] * t[k]);
                z += wt[k] * f[k];
                m1 += wt[k] * f[k] * t[k];
            }
            m1 /= z;
            double m2 = 0.0;
            for (int k = 0; k < 8; ++k)
                m2 += wt[k] * f[k] * (t[k] - m1) * (t[k] - m1);
            Truncated out;
            out.log_mass = std::log(z) - 0.5 * c * c - 0.5 * std::log(2.0 * std::numbers::pi);
            out.mean = c + m1;
            out.var = m2 / z;
            return out;
        }
    }

    Truncated truncated(double lo, double hi)
    {
        Truncated out;
        if (!(hi > lo))
        {
            // Empty or single-point cell: the mass collapses onto lo
            out.log_mass = -inf;
            out.mean = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
            out.var = 0.0;
            return out;
        }
        if (lo == -inf && hi == inf)
            return out;

        // Narrow cells: the edge formulas cancel, so integrate the density directly around the centre
        if (const double w = hi - lo, c = 0.5 * (lo + hi); w < 0.05 && w * std::abs(c) < 0.5)
            return narrow_cell(c, 0.5 * w);

        // Work with the cell whose centre is on the left so both log-CDFs stay accurate
        const bool flip = lo + hi > 0.0;
        const double a = flip ? -hi : lo;
        const double b = flip ? -lo : hi;

        const double lb = log_cdf(b);
        const double la = log_cdf(a);
        const double log_z = lb + std::log(-std::expm1(la - lb));
        out.log_mass = log_z;

        const double pa = (a == -inf) ? 0.0 : std::exp(log_pdf(a) - log_z);
        const double pb = (b == inf) ? 0.0 : std::exp(log_pdf(b) - log_z);
        double mean = pa - pb;
        double var = 1.0 + scaled_edge(a, log_pdf(a) - log_z) - scaled_edge(b, log_pdf(b) - log_z) - mean * mean;

        // Guard against round-off in narrow or deep-tail cells
        mean = std::clamp(mean, a, b);
        const double width = b - a;
        var = std::clamp(var, 0.0, std::min(1.0, width * width / 4.0));

        out.mean = flip ? -mean : mean;
        out.var = var;
        return out;
    }
}
