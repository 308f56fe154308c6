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

#ifndef GLQVBCE_MMSE_MODULE_HPP
#define GLQVBCE_MMSE_MODULE_HPP

#include "glqvbce/ep_messages.hpp"
#include "glqvbce/execution.hpp"
#include "glqvbce/quantizer.hpp"

#include <armadillo>

namespace glqvbce
{
    // Measurements seen by the componentwise MMSE module.
    // With the identity quantizer `values` holds the unquantized samples and codes are empty.
    struct Observation
    {
        QuantizerSpec spec;
        QuantizedSamples codes;
        arma::cx_vec values;
        double sigma2 = 1.0; // channel noise variance (real + imaginary)

        static Observation quantized(const QuantizerSpec &spec, const arma::cx_vec &raw, double sigma2);
        static Observation from_codes(const QuantizerSpec &spec, QuantizedSamples codes, double sigma2);
        static Observation unquantized(const arma::cx_vec &y, double sigma2);

        arma::uword size() const { return spec.is_identity() ? values.n_elem : codes.size(); }
        void validate() const;
    };

    // Posterior mean and variance of one real dimension with prior N(mean, var) and
    // noise N(0, noise_var) observed only through the cell [lo, hi)
    struct ScalarMoments
    {
        double mean;
        double var;
    };
    ScalarMoments interval_posterior(double mean, double var, double noise_var, double lo, double hi);

    // Componentwise posterior of z under the cell likelihood, real and imaginary parts independent
    GaussianMessage quantized_posterior_moments(const GaussianMessage &cavity, const Observation &obs,
                                                Exec exec = Exec::serial);

    // Componentwise posterior of z under y = z + w, w ~ CN(0, sigma2)
    GaussianMessage gaussian_posterior_moments(const GaussianMessage &cavity, const arma::cx_vec &y, double sigma2);

    // Extrinsic message from the MMSE module back to the linear module
    GaussianMessage module_c_step(const GaussianMessage &cavity, const Observation &obs,
                                  const MessageGuards &guards = {}, Exec exec = Exec::serial,
                                  arma::uword *clamped = nullptr);
}

#endif
