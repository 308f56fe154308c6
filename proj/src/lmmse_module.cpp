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

#include "glqvbce/lmmse_module.hpp"

#include <stdexcept>

namespace glqvbce
{
    void PseudoLinearModel::validate() const
    {
        pilot.validate();
        if (z_tilde.n_elem != noise_var.n_elem || z_tilde.n_elem % pilot.length() != 0 || z_tilde.n_elem == 0)
            throw std::invalid_argument("PseudoLinearModel: inconsistent lengths.");
        if (noise_var.min() <= 0.0)
            throw std::invalid_argument("PseudoLinearModel: noise variances must be positive.");
    }

    arma::cx_mat pilot_operator(const PilotBlock &pilot, arma::uword M)
    {
        return arma::kron(pilot.x, arma::eye<arma::cx_mat>(M, M));
    }

    GaussianMessage h_posterior(const PseudoLinearModel &model, const GaussianMessage &prior_h)
    {
        model.validate();
        const arma::uword M = model.antennas(), T = model.pilot.length();
        if (prior_h.size() != M)
            throw std::invalid_argument("h_posterior: prior length must equal the number of antennas.");
        if (prior_h.var.min() <= 0.0)
            throw std::invalid_argument("h_posterior: prior variances must be positive.");

        GaussianMessage post{arma::cx_vec(M), arma::vec(M)};
        for (arma::uword m = 0; m < M; ++m)
        {
            double precision = 1.0 / prior_h.var(m);
            cdouble linear = prior_h.mean(m) / prior_h.var(m);
            for (arma::uword t = 0; t < T; ++t)
            {
                const cdouble x = model.pilot.x(t);
                const arma::uword k = t * M + m;
                precision += std::norm(x) / model.noise_var(k);
                linear += std::conj(x) * model.z_tilde(k) / model.noise_var(k);
            }
            post.var(m) = 1.0 / precision;
            post.mean(m) = linear / precision;
        }
        return post;
    }

    GaussianMessage h_posterior_dense(const arma::cx_mat &Phi, const arma::cx_vec &z_tilde, const arma::vec &noise_var,
                                      const GaussianMessage &prior_h, arma::cx_mat *covariance)
    {
        if (Phi.n_rows != z_tilde.n_elem || Phi.n_rows != noise_var.n_elem || Phi.n_cols != prior_h.size())
            throw std::invalid_argument("h_posterior_dense: inconsistent dimensions.");
        const arma::cx_mat PhiHD = Phi.t() * arma::diagmat(arma::conv_to<arma::cx_vec>::from(1.0 / noise_var));
        const arma::cx_mat precision = PhiHD * Phi + arma::diagmat(arma::conv_to<arma::cx_vec>::from(1.0 / prior_h.var));
        const arma::cx_mat Sigma = arma::inv(precision);
        GaussianMessage post;
        post.mean = Sigma * (PhiHD * z_tilde + prior_h.mean / prior_h.var);
        post.var = arma::real(Sigma.diag());
        if (covariance)
            *covariance = Sigma;
        return post;
    }

    GaussianMessage module_b_to_h(const PseudoLinearModel &model, const GaussianMessage &prior_h,
                                  const MessageGuards &guards, arma::uword *clamped)
    {
        return extrinsic(h_posterior(model, prior_h), prior_h, guards, clamped);
    }

    GaussianMessage z_posterior(const PseudoLinearModel &model, const GaussianMessage &prior_h)
    {
        const GaussianMessage h = h_posterior(model, prior_h);
        const arma::uword M = model.antennas(), T = model.pilot.length();
        GaussianMessage z{arma::cx_vec(M * T), arma::vec(M * T)};
        for (arma::uword t = 0; t < T; ++t)
        {
            const cdouble x = model.pilot.x(t);
            for (arma::uword m = 0; m < M; ++m)
            {
                z.mean(t * M + m) = x * h.mean(m);
                z.var(t * M + m) = std::norm(x) * h.var(m);
            }
        }
        return z;
    }

    GaussianMessage z_posterior_and_extrinsic(const PseudoLinearModel &model, const GaussianMessage &prior_h_new,
                                              const GaussianMessage &cavity_z, const MessageGuards &guards,
                                              arma::uword *clamped)
    {
        return extrinsic(z_posterior(model, prior_h_new), cavity_z, guards, clamped);
    }
}
