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

#include "glqvbce/ep_messages.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace glqvbce
{
    GaussianMessage GaussianMessage::flat(arma::uword n, double var)
    {
        return {arma::cx_vec(n, arma::fill::zeros), arma::vec(n, arma::fill::value(var))};
    }

    static void check_lengths(const GaussianMessage &a, const GaussianMessage &b, const char *who)
    {
        if (a.mean.n_elem != a.var.n_elem || b.mean.n_elem != b.var.n_elem || a.size() != b.size())
            throw std::invalid_argument(std::string(who) + ": message length mismatch.");
    }

    GaussianMessage extrinsic(const GaussianMessage &post, const GaussianMessage &cavity,
                              const MessageGuards &guards, arma::uword *clamped)
    {
        check_lengths(post, cavity, "extrinsic");
        const arma::uword n = post.size();
        GaussianMessage out{arma::cx_vec(n), arma::vec(n)};
        arma::uword n_clamped = 0;
        for (arma::uword i = 0; i < n; ++i)
        {
            const double prec = 1.0 / post.var(i) - 1.0 / cavity.var(i);
            if (!(prec > guards.eps))
            {
                out.mean(i) = post.mean(i);
                out.var(i) = guards.v_max;
                ++n_clamped;
                continue;
            }
            const double v = 1.0 / prec;
            if (v > guards.v_max)
            {
                out.mean(i) = post.mean(i);
                out.var(i) = guards.v_max;
                ++n_clamped;
                continue;
            }
            out.var(i) = v;
            out.mean(i) = v * (post.mean(i) / post.var(i) - cavity.mean(i) / cavity.var(i));
        }
        if (clamped)
            *clamped = n_clamped;
        return out;
    }

    GaussianMessage combine(const GaussianMessage &a, const GaussianMessage &b, const MessageGuards &guards)
    {
        check_lengths(a, b, "combine");
        const arma::uword n = a.size();
        GaussianMessage out{arma::cx_vec(n), arma::vec(n)};
        for (arma::uword i = 0; i < n; ++i)
        {
            const double v = std::min(1.0 / (1.0 / a.var(i) + 1.0 / b.var(i)), guards.v_max);
            out.var(i) = v;
            out.mean(i) = v * (a.mean(i) / a.var(i) + b.mean(i) / b.var(i));
        }
        return out;
    }

    GaussianMessage damp(const GaussianMessage &fresh, const GaussianMessage &previous, double factor)
    {
        if (factor >= 1.0 || previous.size() == 0)
            return fresh;
        check_lengths(fresh, previous, "damp");
        if (!(factor > 0.0))
            throw std::invalid_argument("damp: factor must lie in (0, 1].");
        const arma::uword n = fresh.size();
        GaussianMessage out{arma::cx_vec(n), arma::vec(n)};
        for (arma::uword i = 0; i < n; ++i)
        {
            const double prec = factor / fresh.var(i) + (1.0 - factor) / previous.var(i);
            out.var(i) = 1.0 / prec;
            out.mean(i) = out.var(i) * (factor * fresh.mean(i) / fresh.var(i) + (1.0 - factor) * previous.mean(i) / previous.var(i));
        }
        return out;
    }
}
