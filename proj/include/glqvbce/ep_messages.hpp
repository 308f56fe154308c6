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

#ifndef GLQVBCE_EP_MESSAGES_HPP
#define GLQVBCE_EP_MESSAGES_HPP

#include <armadillo>

namespace glqvbce
{
    // Diagonal circular complex Gaussian CN(mean, diag(var))
    struct GaussianMessage
    {
        arma::cx_vec mean;
        arma::vec var;

        arma::uword size() const { return mean.n_elem; }

        // Zero mean, constant variance
        static GaussianMessage flat(arma::uword n, double var);
    };

    // Numerical guards shared by every message division.
    // v_max is the largest variance a message may carry (1e8 x the signal power scale).
    struct MessageGuards
    {
        double v_max = 1e8;
        double eps = 1e-12;

        static MessageGuards for_power(double power) { return {1e8 * power, 1e-12}; }
    };

    // Posterior divided by cavity. Components whose precision difference is <= eps
    // (posterior no more certain than the cavity) become (posterior mean, v_max).
    // Returns the number of clamped components through *clamped when given.
    GaussianMessage extrinsic(const GaussianMessage &post, const GaussianMessage &cavity,
                              const MessageGuards &guards = {}, arma::uword *clamped = nullptr);

    // Product of two diagonal Gaussians (precisions add)
    GaussianMessage combine(const GaussianMessage &a, const GaussianMessage &b, const MessageGuards &guards = {});

    // Convex mix in natural parameters: factor 1 keeps `fresh`, factor 0 keeps `previous`
    GaussianMessage damp(const GaussianMessage &fresh, const GaussianMessage &previous, double factor);
}

#endif
