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

#ifndef GLQVBCE_NORMAL_HPP
#define GLQVBCE_NORMAL_HPP

namespace glqvbce::normal
{
    double pdf(double x);
    double log_pdf(double x);
    double cdf(double x);

    // log Phi(x). Uses the continued-fraction Mills ratio below x = -8 so that cells
    // far in the tail keep a finite log-probability.
    double log_cdf(double x);

    // Moments of a standard normal truncated to [lo, hi); either bound may be infinite.
    struct Truncated
    {
        double log_mass = 0.0; // log(Phi(hi) - Phi(lo))
        double mean = 0.0;     // (phi(lo) - phi(hi)) / Z
        double var = 1.0;      // 1 + (lo phi(lo) - hi phi(hi)) / Z - mean^2
    };

    Truncated truncated(double lo, double hi);
}

#endif
