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

#include "glqvbce/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace glqvbce
{
    QuantizerSpec QuantizerSpec::uniform(int bit_depth, double sigma_z)
    {
        if (bit_depth < 2)
            throw std::invalid_argument("QuantizerSpec::uniform: bit depth must be >= 2, use one_bit() for B = 1.");
        if (bit_depth > 24)
            throw std::invalid_argument("QuantizerSpec::uniform: bit depth too large.");
        if (!(sigma_z > 0.0))
            throw std::invalid_argument("QuantizerSpec::uniform: sigma_z must be positive.");

        QuantizerSpec q;
        q.bits = bit_depth;
        const int D = 1 << bit_depth;
        const double range = 3.0 * sigma_z / std::sqrt(2.0);
        q.delta = 3.0 * sigma_z / std::pow(2.0, double(bit_depth) - 0.5);
        q.cuts.resize(std::size_t(D - 1));
        for (int k = 1; k < D; ++k)
            q.cuts[std::size_t(k - 1)] = -range + double(k) * q.delta;
        q.cuts[std::size_t(D / 2 - 1)] = 0.0; // exact symmetry about zero
        q.reps.resize(std::size_t(D));
        q.reps.front() = q.cuts.front() - 0.5 * q.delta;
        q.reps.back() = q.cuts.back() + 0.5 * q.delta;
        for (int b = 1; b < D - 1; ++b)
            q.reps[std::size_t(b)] = 0.5 * (q.cuts[std::size_t(b - 1)] + q.cuts[std::size_t(b)]);
        return q;
    }

    QuantizerSpec QuantizerSpec::one_bit()
    {
        QuantizerSpec q;
        q.bits = 1;
        q.cuts = {0.0};
        q.reps = {-1.0, 1.0};
        return q;
    }

    QuantizerSpec QuantizerSpec::identity() { return QuantizerSpec{}; }

    QuantizerSpec QuantizerSpec::from_thresholds(std::vector<double> finite_thresholds, std::vector<double> representations)
    {
        if (finite_thresholds.empty())
            throw std::invalid_argument("QuantizerSpec::from_thresholds: need at least one threshold.");
        for (std::size_t i = 1; i < finite_thresholds.size(); ++i)
            if (!(finite_thresholds[i] > finite_thresholds[i - 1]))
                throw std::invalid_argument("QuantizerSpec::from_thresholds: thresholds must be strictly increasing.");
        const std::size_t D = finite_thresholds.size() + 1;
        if (representations.empty())
        {
            representations.resize(D);
            for (std::size_t b = 1; b + 1 < D; ++b)
                representations[b] = 0.5 * (finite_thresholds[b - 1] + finite_thresholds[b]);
            representations.front() = finite_thresholds.front();
            representations.back() = finite_thresholds.back();
        }
        if (representations.size() != D)
            throw std::invalid_argument("QuantizerSpec::from_thresholds: need one representation per cell.");
        QuantizerSpec q;
        q.bits = int(std::ceil(std::log2(double(D))));
        q.bits = std::max(q.bits, 1);
        q.cuts = std::move(finite_thresholds);
        q.reps = std::move(representations);
        return q;
    }

    int QuantizerSpec::quantize(double value) const
    {
        if (std::isnan(value))
            throw std::invalid_argument("QuantizerSpec::quantize: NaN input.");
        if (is_identity())
            throw std::logic_error("QuantizerSpec::quantize: identity quantizer has no cells.");
        // First threshold strictly greater than value; half-open cells [t_b, t_{b+1})
        return int(std::upper_bound(cuts.begin(), cuts.end(), value) - cuts.begin());
    }

    std::pair<double, double> QuantizerSpec::interval_of(int code) const
    {
        if (code < 0 || code >= cells())
            throw std::out_of_range("QuantizerSpec::interval_of: code " + std::to_string(code) + " out of range.");
        constexpr double inf = std::numeric_limits<double>::infinity();
        const double lo = (code == 0) ? -inf : cuts[std::size_t(code - 1)];
        const double hi = (code == cells() - 1) ? inf : cuts[std::size_t(code)];
        return {lo, hi};
    }

    double QuantizerSpec::representation(int code) const
    {
        if (code < 0 || code >= cells())
            throw std::out_of_range("QuantizerSpec::representation: code " + std::to_string(code) + " out of range.");
        return reps[std::size_t(code)];
    }

    QuantizedSamples quantize_complex(const QuantizerSpec &spec, const arma::cx_vec &v)
    {
        QuantizedSamples out;
        out.re.resize(v.n_elem);
        out.im.resize(v.n_elem);
        for (arma::uword i = 0; i < v.n_elem; ++i)
        {
            out.re[i] = spec.quantize(v(i).real());
            out.im[i] = spec.quantize(v(i).imag());
        }
        return out;
    }

    arma::cx_vec dequantize_complex(const QuantizerSpec &spec, const QuantizedSamples &codes, double scale)
    {
        arma::cx_vec y(codes.size());
        for (arma::uword i = 0; i < codes.size(); ++i)
            y(i) = {scale * spec.representation(codes.re[i]), scale * spec.representation(codes.im[i])};
        return y;
    }

    double aqnm_noise_variance(int bit_depth, double sigma_z2)
    {
        if (bit_depth < 1)
            throw std::invalid_argument("aqnm_noise_variance: bit depth must be >= 1.");
        if (!(sigma_z2 > 0.0))
            throw std::invalid_argument("aqnm_noise_variance: sigma_z2 must be positive.");
        return 3.0 * sigma_z2 / std::pow(4.0, double(bit_depth));
    }
}
