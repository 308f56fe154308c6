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

#include "glqvbce/estimator.hpp"
#include "glqvbce/lmmse_module.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace glqvbce
{
    std::string to_string(Variant v)
    {
        switch (v)
        {
        case Variant::gl_qvbce:
            return "GL-QVBCE";
        case Variant::gl_vbce:
            return "GL-VBCE";
        case Variant::gl_vbce_aqnm:
            return "GL-VBCE-AQNM";
        case Variant::ls:
            return "LS";
        }
        return "?";
    }

    Variant variant_from_string(const std::string &name)
    {
        for (Variant v : {Variant::gl_qvbce, Variant::gl_vbce, Variant::gl_vbce_aqnm, Variant::ls})
            if (to_string(v) == name)
                return v;
        throw std::invalid_argument("Unknown estimator variant '" + name + "'.");
    }

    double one_bit_representation_scale(double power)
    {
        return 3.0 * std::sqrt(power) / (2.0 * std::sqrt(2.0));
    }

    static void fill_point_estimates(const ValseResult &vr, ChannelEstimate &est)
    {
        const SupportState &s = vr.support;
        std::vector<arma::uword> order(s.active.size());
        for (arma::uword p = 0; p < order.size(); ++p)
            order[p] = p;
        std::stable_sort(order.begin(), order.end(), [&](arma::uword a, arma::uword b)
                         { return vr.freq[s.active[a]].mu < vr.freq[s.active[b]].mu; });

        const arma::uword L = order.size();
        est.L_hat = L;
        est.theta_hat.set_size(L);
        est.g_hat.set_size(L);
        est.phase_hat.set_size(L);
        est.freq_posteriors.clear();
        for (arma::uword l = 0; l < L; ++l)
        {
            const arma::uword p = order[l];
            const VonMisesPosterior &q = vr.freq[s.active[p]];
            est.theta_hat(l) = q.mu;
            est.g_hat(l) = std::abs(s.beta(p));
            est.phase_hat(l) = std::arg(s.beta(p)); // std::arg lies in [-pi, pi]
            if (est.phase_hat(l) == -std::numbers::pi)
                est.phase_hat(l) = std::numbers::pi;
            est.freq_posteriors.push_back(q);
        }
    }

    ChannelEstimate estimate(const Observation &obs, const EstimationSetup &setup, const EstimatorConfig &config,
                             const std::vector<VonMisesPosterior> &priors)
    {
        setup.geom.validate();
        setup.pilot.validate();
        obs.validate();
        if (config.max_outer_iters < 1)
            throw std::invalid_argument("estimate: max_outer_iters must be >= 1.");
        if (!(setup.power > 0.0) || !(setup.sigma2 > 0.0))
            throw std::invalid_argument("estimate: power and noise variance must be positive.");
        const arma::uword M = setup.geom.size(), T = setup.pilot.length();
        if (obs.size() != M * T)
            throw std::invalid_argument("estimate: observation length must equal M * T.");

        const MessageGuards guards = MessageGuards::for_power(setup.power);
        const double var_floor = 1e-10 * setup.power;

        GaussianMessage to_h = GaussianMessage::flat(M, guards.v_max);
        GaussianMessage to_z = GaussianMessage::flat(M * T, config.initial_z_variance_scale * (setup.power + setup.sigma2));

        ValseState valse_state;
        ChannelEstimate est;
        ValseResult vr;
        arma::cx_vec h_prev;
        for (int it = 1; it <= config.max_outer_iters; ++it)
        {
            est.iterations_used = it;

            // Module C: componentwise MMSE, extrinsic toward the linear module
            arma::uword clamp_c = 0;
            const GaussianMessage from_c = module_c_step(to_z, obs, guards, config.exec, &clamp_c);
            const PseudoLinearModel model{setup.pilot, from_c.mean, from_c.var};

            // Module B: LMMSE over h, extrinsic toward VALSE
            const GaussianMessage from_b = module_b_to_h(model, to_h, guards);

            // Module A: VALSE on the pseudo observation
            const LsePseudoProblem problem{from_b.mean, from_b.var, setup.geom, priors};
            vr = run_valse(problem, config.valse, &valse_state);
            GaussianMessage post_a = vr.h_post;
            post_a.var.transform([&](double v)
                                 { return std::max(v, var_floor); });

            arma::uword clamp_a = 0;
            GaussianMessage next_to_h = extrinsic(post_a, from_b, guards, &clamp_a);
            next_to_h = damp(next_to_h, to_h, config.damping);

            // Module B again: refreshed z belief back to the MMSE module
            const GaussianMessage &cavity_z = config.divide_z_by_previous_message ? to_z : from_c;
            arma::uword clamp_z = 0;
            GaussianMessage next_to_z = z_posterior_and_extrinsic(model, next_to_h, cavity_z, guards, &clamp_z);
            next_to_z = damp(next_to_z, to_z, config.damping);

            to_h = std::move(next_to_h);
            to_z = std::move(next_to_z);

            est.h_hat = post_a.mean;
            est.h_var = vr.h_post.var;
            if (config.record_history)
                est.history.push_back(est.h_hat);

            if (clamp_a == M && clamp_z == M * T && clamp_c == M * T)
                break; // nothing informative left to exchange

            if (h_prev.n_elem == M)
            {
                const double ref = arma::norm(h_prev);
                const double change = arma::norm(est.h_hat - h_prev);
                if ((ref > 0.0 && change / ref < config.outer_tol) || (ref == 0.0 && change == 0.0))
                {
                    est.converged = true;
                    break;
                }
            }
            h_prev = est.h_hat;
        }
        fill_point_estimates(vr, est);
        return est;
    }

    ChannelEstimate estimate_aqnm(const QuantizerSpec &spec, const QuantizedSamples &codes, const EstimationSetup &setup,
                                  const EstimatorConfig &config)
    {
        if (spec.is_identity())
            throw std::invalid_argument("estimate_aqnm: needs a finite-resolution quantizer.");
        const double scale = (spec.bit_depth() == 1) ? one_bit_representation_scale(setup.power) : 1.0;
        const arma::cx_vec y = dequantize_complex(spec, codes, scale);
        const double noise = setup.sigma2 + aqnm_noise_variance(spec.bit_depth(), setup.power);
        EstimationSetup inflated = setup;
        inflated.sigma2 = noise;
        return estimate(Observation::unquantized(y, noise), inflated, config);
    }

    ChannelEstimate estimate_ls(const arma::cx_vec &y, const PilotBlock &pilot)
    {
        pilot.validate();
        const arma::uword T = pilot.length();
        if (y.n_elem % T != 0 || y.n_elem == 0)
            throw std::invalid_argument("estimate_ls: observation length must be a multiple of the pilot length.");
        const double energy = arma::accu(arma::square(arma::abs(pilot.x)));
        if (!(energy > 0.0))
            throw std::invalid_argument("estimate_ls: zero pilot energy.");
        const arma::uword M = y.n_elem / T;
        ChannelEstimate est;
        est.h_hat.zeros(M);
        for (arma::uword t = 0; t < T; ++t)
            est.h_hat += std::conj(pilot.x(t)) * y.subvec(t * M, t * M + M - 1);
        est.h_hat /= energy;
        est.h_var.zeros(M);
        est.iterations_used = 1;
        est.converged = true;
        return est;
    }

    std::vector<ChannelEstimate> estimate_sequential(const std::vector<StreamBlock> &blocks, const ArrayGeometry &geom,
                                                     double sigma2, double power, double lambda,
                                                     const EstimatorConfig &config)
    {
        if (!(lambda > 0.0 && lambda <= 1.0))
            throw std::invalid_argument("estimate_sequential: lambda must lie in (0, 1].");
        std::vector<ChannelEstimate> out;
        out.reserve(blocks.size());
        std::vector<VonMisesPosterior> priors;
        for (const StreamBlock &block : blocks)
        {
            const EstimationSetup setup{geom, block.pilot, sigma2, power};
            out.push_back(estimate(block.obs, setup, config, priors));
            priors = set_sequential_prior(out.back().freq_posteriors, lambda);
        }
        return out;
    }
}
