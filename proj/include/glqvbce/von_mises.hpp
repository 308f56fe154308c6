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

#ifndef GLQVBCE_VON_MISES_HPP
#define GLQVBCE_VON_MISES_HPP

#include <armadillo>
#include <complex>
#include <vector>

namespace glqvbce
{
    // Belief over a circular frequency: density proportional to exp(kappa * cos(theta - mu))
    struct VonMisesPosterior
    {
        double mu = 0.0;    // Mean direction in [-pi, pi)
        double kappa = 0.0; // Concentration, 0 = uniform on the circle
    };

    // Wraps an angle to [-pi, pi)
    double wrap_to_pi(double angle);

    // Ratios I_m(kappa) / I_0(kappa) for m = 0 .. max_order.
    // Backward ratio recurrence for moderate kappa, Hankel asymptotic series once kappa
    // dominates max_order^2. Never overflows. Throws std::domain_error for kappa < 0.
    arma::vec bessel_ratios(double kappa, arma::uword max_order);

    // Single ratio I_m(kappa) / I_0(kappa), |m| allowed
    double bessel_ratio(double kappa, int m);
}

#endif
