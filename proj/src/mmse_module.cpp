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

#include "glqvbce/mmse_module.hpp"
#include "glqvbce/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace glqvbce
{
    Observation Observation::quantized(const QuantizerSpec &spec, const arma::cx_vec &raw, double sigma2)
    {
        if (spec.is_identity())
            return unquantized(raw, sigma2);
        return from_codes(spec, quantize_complex(spec, raw), sigma2);
    }

    Observation Observation::from_codes(const QuantizerSpec &spec, QuantizedSamples codes, double sigma2)
    {
        Observation o;
        o.spec = spec;
        o.codes = std::move(codes);
        o.sigma2 = sigma2;
        o.validate();
        return o;
    }

    Observation Observation::unquantized(const arma::cx_vec &y, double sigma2)
    {
        Observation o;
        o.spec = QuantizerSpec::identity();
        o.values = y;
        o.sigma2 = sigma2;
        o.validate();
        return o;
    }

    void Observation::validate() const
    {
        if (!(sigma2 > 0.0))
            throw std::invalid_argument("Observation: noise variance must be positive.");
        if (spec.is_identity())
            return;
        if (codes.re.size() != codes.im.size())
            throw std::invalid_argument("Observation: real and imaginary code lengths differ.");
        for (std::size_t i = 0; i < codes.re.size(); ++i)
            if (codes.re[i] < 0 || codes.re[i] >= spec.cells() || codes.im[i] < 0 || codes.im[i] >= spec.cells())
                throw std::invalid_argument("Observation: code out of range.");
    }

    ScalarMoments interval_posterior(double mean, double var, double noise_var, double lo, double hi)
    {
        const double s2 = var + noise_var;
        const double s = std::sqrt(s2);
        const normal::Truncated t = normal::truncated((lo - mean) / s, (hi - mean) / s);
        const double gain = var / s2;
        return {mean + var / s * t.mean, var * (1.0 - gain * (1.0 - t.var))};
    }

    namespace
    {
        inline void moments_at(const GaussianMessage &cavity, const Observation &obs, arma::uword i,
                               GaussianMessage &out)
        {
            const double half_var = 0.5 * cavity.var(i);
            const double half_noise = 0.5 * obs.sigma2;
            const auto [re_lo, re_hi] = obs.spec.interval_of(obs.codes.re[i]);
            const auto [im_lo, im_hi] = obs.spec.interval_of(obs.codes.im[i]);
            const ScalarMoments re = interval_posterior(cavity.mean(i).real(), half_var, half_noise, re_lo, re_hi);
            const ScalarMoments im = interval_posterior(cavity.mean(i).imag(), half_var, half_noise, im_lo, im_hi);
            out.mean(i) = {re.mean, im.mean};
            out.var(i) = re.var + im.var;
        }
    }

    GaussianMessage quantized_posterior_moments(const GaussianMessage &cavity, const Observation &obs, Exec exec)
    {
        if (cavity.size() != obs.size())
            throw std::invalid_argument("quantized_posterior_moments: cavity and observation lengths differ.");
        if (obs.spec.is_identity())
            return gaussian_posterior_moments(cavity, obs.values, obs.sigma2);

        const arma::uword n = cavity.size();
        GaussianMessage out{arma::cx_vec(n), arma::vec(n)};
        if (exec == Exec::parallel)
        {
#pragma omp parallel for schedule(static)
            for (arma::uword i = 0; i < n; ++i)
                moments_at(cavity, obs, i, out);
        }
        else
        {
            for (arma::uword i = 0; i < n; ++i)
                moments_at(cavity, obs, i, out);
        }
        return out;
    }

    GaussianMessage gaussian_posterior_moments(const GaussianMessage &cavity, const arma::cx_vec &y, double sigma2)
    {
        if (cavity.size() != y.n_elem)
            throw std::invalid_argument("gaussian_posterior_moments: cavity and observation lengths differ.");
        const arma::uword n = y.n_elem;
        GaussianMessage out{arma::cx_vec(n), arma::vec(n)};
        for (arma::uword i = 0; i < n; ++i)
        {
            const double v = 1.0 / (1.0 / cavity.var(i) + 1.0 / sigma2);
            out.var(i) = v;
            out.mean(i) = v * (cavity.mean(i) / cavity.var(i) + y(i) / sigma2);
        }
        return out;
    }

    GaussianMessage module_c_step(const GaussianMessage &cavity, const Observation &obs,
                                  const MessageGuards &guards, Exec exec, arma::uword *clamped)
    {
        return extrinsic(quantized_posterior_moments(cavity, obs, exec), cavity, guards, clamped);
    }
}
