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

#ifndef GLQVBCE_CRB_HPP
#define GLQVBCE_CRB_HPP

#include "glqvbce/array_channel.hpp"
#include "glqvbce/execution.hpp"
#include "glqvbce/quantizer.hpp"

#include <armadillo>

namespace glqvbce
{
    // Fisher information over kappa = [theta; g; varphi] (3L parameters) and its inverse
    struct FimResult
    {
        arma::mat fim;
        arma::mat crb;               // empty when the FIM is singular
        bool crb_available = false;
        arma::uword paths = 0;

        // Diagonals of the theta, g and varphi blocks of the CRB
        arma::vec crb_theta() const;
        arma::vec crb_gain() const;
        arma::vec crb_phase() const;
    };

    // Z = h x^T (M x T)
    arma::cx_mat noiseless_signal(const ArrayGeometry &geom, const GroundTruthChannel &truth, const PilotBlock &pilot);

    // d Re{Z_it} / d kappa and d Im{Z_it} / d kappa, stored as M x T x 3L cubes
    struct SignalDerivatives
    {
        arma::cube re;
        arma::cube im;
    };
    SignalDerivatives z_derivatives(const ArrayGeometry &geom, const GroundTruthChannel &truth, const PilotBlock &pilot);

    // Information carried by one quantized real dimension with mean `mean` and noise variance sigma2 / 2,
    // (2 / sigma2) sum_b [phi(a_{b+1}) - phi(a_b)]^2 / [Phi(a_{b+1}) - Phi(a_b)]. Equals 2 / sigma2 for the identity quantizer.
    double information_coefficient(double mean, double sigma2, const QuantizerSpec &spec);

    // lambda_it (real parts) and chi_it (imaginary parts), each M x T
    struct QuantizedCoefficients
    {
        arma::mat lambda;
        arma::mat chi;
    };
    QuantizedCoefficients quantized_coefficients(const arma::cx_mat &Z, double sigma2, const QuantizerSpec &spec);

    // Quantized FIM, or the unquantized one when spec is the identity quantizer
    FimResult fim(const ArrayGeometry &geom, const GroundTruthChannel &truth, const PilotBlock &pilot, double sigma2,
                  const QuantizerSpec &spec, Exec exec = Exec::serial);

    inline double to_db(double v) { return 10.0 * std::log10(v); }
}

#endif
