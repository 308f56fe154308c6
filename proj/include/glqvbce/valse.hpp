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

#ifndef GLQVBCE_VALSE_HPP
#define GLQVBCE_VALSE_HPP

#include "glqvbce/array_channel.hpp"
#include "glqvbce/ep_messages.hpp"
#include "glqvbce/von_mises.hpp"

#include <armadillo>
#include <vector>

namespace glqvbce
{
    struct ValseConfig
    {
        int max_sweeps = 50;             // sweeps of {support/weights, frequencies, hyperparameters}
        double frequency_tol = 1e-6;     // stop once the support is stable and max |d mu| is below this
        double expected_paths = 5.0;     // sets the initial activation probability
        int periodogram_oversampling = 16;
        int mode_grid_factor = 4;        // coarse grid of mode_grid_factor * N points for the mode search
        int newton_steps = 30;
        int candidates = 0;              // number of line candidates, 0 = array aperture N
    };

    // Bernoulli-Gaussian weight posterior restricted to the active set
    struct SupportState
    {
        std::vector<arma::uword> active; // S, sorted ascending
        arma::cx_vec beta;               // posterior means over S, in the order of `active`
        arma::cx_mat C;                  // posterior covariance over S
        double rho = 0.5;                // activation probability
        double tau = 1.0;                // weight prior variance

        bool contains(arma::uword i) const;
        arma::uword position(arma::uword i) const; // index of i inside `active`
    };

    // h_tilde = A(theta) beta + n_tilde, n_tilde ~ CN(0, diag(v_tilde))
    struct LsePseudoProblem
    {
        arma::cx_vec h_tilde;
        arma::vec v_tilde;
        ArrayGeometry geom;
        std::vector<VonMisesPosterior> priors; // one per candidate, kappa = 0 is uninformative; may be empty

        void validate() const;
    };

    // Everything VALSE carries between calls; reused across outer EP iterations
    struct ValseState
    {
        bool initialized = false;
        std::vector<VonMisesPosterior> freq; // one per candidate
        arma::cx_mat a_hat;                  // M x N expected steering vectors
        SupportState support;
    };

    struct ValseResult
    {
        GaussianMessage h_post;
        SupportState support;
        std::vector<VonMisesPosterior> freq; // one per candidate; only active entries are meaningful
        arma::uword L_hat = 0;
        int sweeps = 0;
        bool converged = false;
    };

    // Runs VALSE to convergence. When `state` is given and initialized it is used as a warm start,
    // and it receives the final state on return.
    ValseResult run_valse(const LsePseudoProblem &problem, const ValseConfig &config, ValseState *state = nullptr);

    // Mode-matched von Mises fit of q(theta) ∝ exp(Re{eta^H a(theta)} + kappa0 cos(theta - mu0)).
    // The mode is found on a coarse grid of grid_points and polished with Newton steps; the
    // concentration is the negative curvature at the mode (0 if the curvature is not negative).
    VonMisesPosterior update_frequency(const ArrayGeometry &geom, const arma::cx_vec &eta, const VonMisesPosterior &prior,
                                       int grid_points, int newton_steps = 30);

    // Log-density coefficients: ln q(theta) = Re{ sum_k c_k exp(j k theta) }, k = 0 .. max(max_index, 1)
    arma::cx_vec frequency_log_density(const ArrayGeometry &geom, const arma::cx_vec &eta, const VonMisesPosterior &prior);

    // Natural parameter of the frequency update of active component i
    arma::cx_vec frequency_natural_parameter(arma::uword i, const arma::cx_vec &h_tilde, const arma::vec &weights,
                                             const arma::cx_mat &a_hat, const SupportState &support);

    // Gram matrix J (J_ii = sum W, J_ij = a_i^H diag(W) a_j) and u = A^H (W .* h_tilde)
    arma::cx_mat weighted_gram(const arma::cx_mat &a_hat, const arma::vec &weights);
    arma::cx_vec weighted_projection(const arma::cx_mat &a_hat, const arma::vec &weights, const arma::cx_vec &h_tilde);

    // Posterior of the active weights for a fixed support
    void solve_weights(const arma::cx_mat &J, const arma::cx_vec &u, SupportState &support);

    // Objective change for flipping each candidate (activation if inactive, deactivation if active)
    arma::vec flip_gains(const arma::cx_mat &J, const arma::cx_vec &u, const SupportState &support);

    // Greedy single-flip ascent from support.active; returns the number of flips. Weights are solved on exit.
    int update_support_and_weights(const arma::cx_mat &J, const arma::cx_vec &u, SupportState &support);

    // rho = |S| / N clamped to [1/N, 1 - 1/N]; tau = mean(|beta|^2 + C_ii) over S (unchanged if S is empty)
    void update_hyperparameters(SupportState &support, arma::uword candidates);

    // Channel posterior implied by the weights and frequency beliefs
    GaussianMessage channel_posterior(const arma::cx_mat &a_hat, const SupportState &support);

    // Damped prior for the next pilot block: mu unchanged, kappa scaled by lambda in (0, 1]
    std::vector<VonMisesPosterior> set_sequential_prior(const std::vector<VonMisesPosterior> &posteriors, double lambda);
}

#endif
