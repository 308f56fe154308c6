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

#ifndef GLQVBCE_QUANTIZER_HPP
#define GLQVBCE_QUANTIZER_HPP

#include <armadillo>
#include <utility>
#include <vector>

namespace glqvbce
{
    // Scalar B-bit quantizer applied separately to real and imaginary parts.
    // Cell b is the half-open interval [t_b, t_{b+1}) with t_0 = -inf and t_{2^B} = +inf.
    // bit_depth == 0 denotes the infinite-resolution (identity) quantizer.
    class QuantizerSpec
    {
    public:
        static QuantizerSpec uniform(int bit_depth, double sigma_z); // B >= 2
        static QuantizerSpec one_bit();
        static QuantizerSpec identity();

        // Any strictly increasing threshold list; representations default to cell midpoints
        static QuantizerSpec from_thresholds(std::vector<double> finite_thresholds, std::vector<double> representations);

        int bit_depth() const { return bits; }
        bool is_identity() const { return bits == 0; }
        int cells() const { return int(reps.size()); }
        double step() const { return delta; } // 0 for non-uniform layouts

        const std::vector<double> &thresholds() const { return cuts; } // finite thresholds t_1 .. t_{D-1}
        const std::vector<double> &representations() const { return reps; }

        int quantize(double value) const;
        std::pair<double, double> interval_of(int code) const;
        double representation(int code) const;

    private:
        int bits = 0;
        double delta = 0.0;
        std::vector<double> cuts;
        std::vector<double> reps;
    };

    struct QuantizedSamples
    {
        std::vector<int> re;
        std::vector<int> im;
        arma::uword size() const { return arma::uword(re.size()); }
    };

    // Maps every real and imaginary part to its cell index. Throws on NaN input or the identity quantizer.
    QuantizedSamples quantize_complex(const QuantizerSpec &spec, const arma::cx_vec &v);

    // Representation values of the codes, one complex number per sample
    arma::cx_vec dequantize_complex(const QuantizerSpec &spec, const QuantizedSamples &codes, double scale = 1.0);

    // Additive quantization noise variance (real + imaginary) of a uniform B-bit quantizer: 3 sigma_z^2 / 4^B
    double aqnm_noise_variance(int bit_depth, double sigma_z2);
}

#endif
