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

#ifndef GLQVBCE_LMMSE_MODULE_HPP
#define GLQVBCE_LMMSE_MODULE_HPP

#include "glqvbce/array_channel.hpp"
#include "glqvbce/ep_messages.hpp"

#include <armadillo>

namespace glqvbce
{
    // z_tilde = Phi h + w_tilde with Phi = x (kron) I_M and w_tilde ~ CN(0, diag(noise_var))
    struct PseudoLinearModel
    {
        PilotBlock pilot;
        arma::cx_vec z_tilde;
        arma::vec noise_var;

        arma::uword antennas() const { return z_tilde.n_elem / pilot.length(); }
        void validate() const;
    };

    // Phi = x (kron) I_M, dense
    arma::cx_mat pilot_operator(const PilotBlock &pilot, arma::uword M);

    // Posterior of h combining the pseudo model with prior_h. Diagonal because Phi^H D Phi is diagonal.
    GaussianMessage h_posterior(const PseudoLinearModel &model, const GaussianMessage &prior_h);

    // Same posterior for an arbitrary measurement operator, by dense inversion. Returns the diagonal.
    GaussianMessage h_posterior_dense(const arma::cx_mat &Phi, const arma::cx_vec &z_tilde, const arma::vec &noise_var,
                                      const GaussianMessage &prior_h, arma::cx_mat *covariance = nullptr);

    // Extrinsic message toward the line-spectral module
    GaussianMessage module_b_to_h(const PseudoLinearModel &model, const GaussianMessage &prior_h,
                                  const MessageGuards &guards = {}, arma::uword *clamped = nullptr);

    // Diagonal projection of the posterior of z = Phi h
    GaussianMessage z_posterior(const PseudoLinearModel &model, const GaussianMessage &prior_h);

    // Posterior of z with the refreshed h prior, divided by `cavity_z`
    GaussianMessage z_posterior_and_extrinsic(const PseudoLinearModel &model, const GaussianMessage &prior_h_new,
                                              const GaussianMessage &cavity_z, const MessageGuards &guards = {},
                                              arma::uword *clamped = nullptr);
}

#endif
