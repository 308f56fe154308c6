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

#include "glqvbce/valse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace glqvbce
{
    namespace
    {
        constexpr double two_pi = 2.0 * std::numbers::pi;

        struct Derivatives
        {
            double value, first, second;
        };

        Derivatives evaluate_log_density(const arma::cx_vec &c, double theta)
        {
            Derivatives d{0.0, 0.0, 0.0};
            for (arma::uword k = 0; k < c.n_elem; ++k)
            {
                if (c(k) == cdouble(0.0, 0.0))
                    continue;
                const double kk = double(k);
                const cdouble term = c(k) * std::polar(1.0, kk * theta);
                d.value += term.real();
                d.first -= kk * term.imag();
                d.second -= kk * kk * term.real();
            }
            return d;
        }

        arma::uword candidate_count(const LsePseudoProblem &problem, const ValseConfig &config)
        {
            const int n = config.candidates > 0 ? config.candidates : problem.geom.aperture;
            return arma::uword(std::max(n, 1));
        }

        // |a(theta_g)^H v|^2 on theta_g = 2 pi g / G, via one zero-padded FFT
        arma::vec periodogram(const ArrayGeometry &geom, const arma::cx_vec &v, arma::uword G)
        {
            arma::cx_vec padded(G, arma::fill::zeros);
            for (arma::uword i = 0; i < geom.size(); ++i)
                padded(arma::uword(geom.indices[i]) % G) += v(i);
            const arma::cx_vec spectrum = arma::fft(padded);
            return arma::square(arma::abs(spectrum));
        }

        // Newton ascent on |a(theta)^H v|^2 from a periodogram bin, steps capped at one bin
        double refine_peak(const ArrayGeometry &geom, const arma::cx_vec &v, double theta, double spacing)
        {
            auto eval = [&](double th, double &p, double &dp, double &ddp)
            {
                cdouble s0(0.0, 0.0), s1(0.0, 0.0), s2(0.0, 0.0);
                for (arma::uword i = 0; i < geom.size(); ++i)
                {
                    const double k = double(geom.indices[i]);
                    const cdouble e = std::conj(v(i)) * std::polar(1.0, k * th);
                    s0 += e;
                    s1 += cdouble(0.0, k) * e;
                    s2 -= k * k * e;
                }
                p = std::norm(s0);
                dp = 2.0 * std::real(std::conj(s0) * s1);
                ddp = 2.0 * (std::norm(s1) + std::real(std::conj(s0) * s2));
            };
            double p, dp, ddp;
            eval(theta, p, dp, ddp);
            for (int it = 0; it < 50; ++it)
            {
                double step = (ddp < 0.0) ? -dp / ddp : std::copysign(0.5 * spacing, dp);
                step = std::clamp(step, -spacing, spacing);
                double pt, dpt, ddpt;
                eval(theta + step, pt, dpt, ddpt);
                int halvings = 0;
                while (pt < p && halvings < 30)
                {
                    step *= 0.5;
                    eval(theta + step, pt, dpt, ddpt);
                    ++halvings;
                }
                if (pt < p)
                    break;
                theta += step;
                p = pt;
                dp = dpt;
                ddp = ddpt;
                if (std::abs(step) < 1e-14)
                    break;
            }
            return wrap_to_pi(theta);
        }

        void refresh_component(arma::uword i, const ArrayGeometry &geom, const arma::vec &W, double sum_w,
                               const arma::cx_vec &h_tilde, ValseState &state, arma::cx_mat &J, arma::cx_vec &u)
        {
            state.a_hat.col(i) = expected_steering_vector(geom, state.freq[i]);
            const arma::cx_vec wa = state.a_hat.col(i) % W;
            arma::cx_vec col = state.a_hat.t() * wa;
            col(i) = sum_w;
            J.col(i) = col;
            J.row(i) = col.t();
            u(i) = arma::cdot(state.a_hat.col(i), W % h_tilde);
        }

        void cold_start(const LsePseudoProblem &problem, const std::vector<VonMisesPosterior> &priors,
                        const ValseConfig &config, arma::uword N, ValseState &state)
        {
            const ArrayGeometry &geom = problem.geom;
            const arma::uword M = geom.size();
            const arma::vec W = 1.0 / problem.v_tilde;
            const double sum_w = arma::accu(W);
            const arma::uword G = arma::uword(std::max(config.periodogram_oversampling, 1)) * arma::uword(std::max(geom.aperture, 1));
            const int mode_grid = config.mode_grid_factor * std::max(geom.aperture, 1);

            state.freq.assign(N, VonMisesPosterior{});
            state.a_hat.set_size(M, N);

            // Informative priors are placed first so later candidates see their residual
            std::vector<arma::uword> order(N);
            for (arma::uword k = 0; k < N; ++k)
                order[k] = k;
            std::stable_partition(order.begin(), order.end(), [&](arma::uword k)
                                  { return priors[k].kappa > 0.0; });

            // fits above this weighted energy count as detections and get cyclically re-refined
            const double detect = 10.0 + 2.0 * std::log(double(G));
            std::vector<arma::uword> detected;
            std::vector<cdouble> fits(N, cdouble(0.0, 0.0));
            auto settle = [&](arma::uword k, const arma::cx_vec &wr, double theta0)
            {
                const cdouble b = arma::cdot(steering_vector(geom, theta0), wr) / sum_w;
                const arma::cx_vec eta = 2.0 * wr * std::conj(b);
                VonMisesPosterior q = update_frequency(geom, eta, priors[k], mode_grid, config.newton_steps);
                if (q.kappa == 0.0 && priors[k].kappa == 0.0)
                    q.mu = theta0;
                state.freq[k] = q;
                state.a_hat.col(k) = expected_steering_vector(geom, q);
                fits[k] = arma::cdot(state.a_hat.col(k), wr) / sum_w;
            };

            arma::cx_vec residual = problem.h_tilde;
            for (const arma::uword k : order)
            {
                const arma::cx_vec wr = W % residual;
                double theta0 = priors[k].mu;
                const bool free = !(priors[k].kappa > 0.0);
                if (free)
                {
                    const arma::vec p = periodogram(geom, wr, G);
                    theta0 = wrap_to_pi(two_pi * double(p.index_max()) / double(G));
                    theta0 = refine_peak(geom, wr, theta0, two_pi / double(G));
                }
                settle(k, wr, theta0);
                residual -= fits[k] * state.a_hat.col(k);
                if (!free || std::norm(fits[k]) * sum_w < detect)
                    continue;

                detected.push_back(k);
                if (detected.size() < 2)
                    continue;
                for (int round = 0; round < 3; ++round)
                    for (const arma::uword d : detected)
                    {
                        residual += fits[d] * state.a_hat.col(d);
                        const arma::cx_vec wd = W % residual;
                        settle(d, wd, refine_peak(geom, wd, state.freq[d].mu, two_pi / double(G)));
                        residual -= fits[d] * state.a_hat.col(d);
                    }
            }

            SupportState &s = state.support;
            s.active.clear();
            s.beta.reset();
            s.C.reset();
            s.rho = 0.5 * std::min(1.0, config.expected_paths / double(N));
            s.tau = arma::accu(arma::square(arma::abs(problem.h_tilde))) / (double(M) * s.rho * double(N));
            s.tau = std::max(s.tau, 1e-12 * arma::mean(problem.v_tilde) + 1e-300);
            state.initialized = true;
        }
    }

    bool SupportState::contains(arma::uword i) const
    {
        return std::binary_search(active.begin(), active.end(), i);
    }

    arma::uword SupportState::position(arma::uword i) const
    {
        const auto it = std::lower_bound(active.begin(), active.end(), i);
        if (it == active.end() || *it != i)
            throw std::out_of_range("SupportState::position: index not active.");
        return arma::uword(it - active.begin());
    }

    void LsePseudoProblem::validate() const
    {
        geom.validate();
        if (h_tilde.n_elem != geom.size() || v_tilde.n_elem != geom.size())
            throw std::invalid_argument("LsePseudoProblem: data length must equal the number of antennas.");
        if (v_tilde.min() <= 0.0 || !v_tilde.is_finite())
            throw std::invalid_argument("LsePseudoProblem: noise variances must be positive and finite.");
    }

    arma::cx_vec frequency_log_density(const ArrayGeometry &geom, const arma::cx_vec &eta, const VonMisesPosterior &prior)
    {
        if (eta.n_elem != geom.size())
            throw std::invalid_argument("frequency_log_density: eta length must equal the number of antennas.");
        arma::cx_vec c(arma::uword(std::max(geom.max_index(), 1)) + 1, arma::fill::zeros);
        for (arma::uword i = 0; i < geom.size(); ++i)
            c(arma::uword(geom.indices[i])) += std::conj(eta(i));
        if (prior.kappa > 0.0 && std::isfinite(prior.kappa))
            c(1) += std::polar(prior.kappa, -prior.mu);
        return c;
    }

    VonMisesPosterior update_frequency(const ArrayGeometry &geom, const arma::cx_vec &eta, const VonMisesPosterior &prior,
                                       int grid_points, int newton_steps)
    {
        if (std::isinf(prior.kappa))
            return prior;
        const arma::cx_vec c = frequency_log_density(geom, eta, prior);
        const arma::uword G = std::max(arma::uword(std::max(grid_points, 4)), 2 * c.n_elem);

        // f(-pi + 2 pi g / G) = Re{ sum_k c_k (-1)^k exp(j 2 pi k g / G) }
        arma::cx_vec shifted(G, arma::fill::zeros);
        for (arma::uword k = 0; k < c.n_elem; ++k)
            shifted(k) = (k % 2 == 0) ? c(k) : -c(k);
        const arma::vec grid_values = arma::real(arma::ifft(shifted)) * double(G);
        const arma::uword g_best = grid_values.index_max();
        const double spacing = two_pi / double(G);
        double theta = -std::numbers::pi + spacing * double(g_best);

        Derivatives d = evaluate_log_density(c, theta);
        for (int it = 0; it < newton_steps; ++it)
        {
            double step = (d.second < 0.0) ? -d.first / d.second : std::copysign(0.5 * spacing, d.first);
            step = std::clamp(step, -spacing, spacing);
            Derivatives trial = evaluate_log_density(c, theta + step);
            int halvings = 0;
            while (trial.value < d.value - 1e-12 * std::abs(d.value) && halvings < 30)
            {
                step *= 0.5;
                trial = evaluate_log_density(c, theta + step);
                ++halvings;
            }
            theta += step;
            d = trial;
            if (std::abs(step) < 1e-13)
                break;
        }

        VonMisesPosterior q;
        q.mu = wrap_to_pi(theta);
        q.kappa = (d.second < 0.0) ? -d.second : 0.0;
        if (q.kappa == 0.0)
            q.mu = wrap_to_pi(-std::numbers::pi + spacing * double(g_best));
        return q;
    }

    arma::cx_vec frequency_natural_parameter(arma::uword i, const arma::cx_vec &h_tilde, const arma::vec &weights,
                                             const arma::cx_mat &a_hat, const SupportState &support)
    {
        const arma::uword pi = support.position(i);
        const cdouble bi = std::conj(support.beta(pi));
        arma::cx_vec acc = h_tilde * bi;
        for (arma::uword pj = 0; pj < support.active.size(); ++pj)
        {
            if (pj == pi)
                continue;
            const cdouble coupling = support.beta(pj) * bi + support.C(pj, pi);
            acc -= coupling * a_hat.col(support.active[pj]);
        }
        return 2.0 * (weights % acc);
    }

    arma::cx_mat weighted_gram(const arma::cx_mat &a_hat, const arma::vec &weights)
    {
        arma::cx_mat wa = a_hat;
        wa.each_col() %= arma::conv_to<arma::cx_vec>::from(weights);
        arma::cx_mat J = a_hat.t() * wa;
        J.diag().fill(cdouble(arma::accu(weights), 0.0));
        return J;
    }

    arma::cx_vec weighted_projection(const arma::cx_mat &a_hat, const arma::vec &weights, const arma::cx_vec &h_tilde)
    {
        return a_hat.t() * (weights % h_tilde);
    }

    void solve_weights(const arma::cx_mat &J, const arma::cx_vec &u, SupportState &support)
    {
        const arma::uword n = support.active.size();
        if (n == 0)
        {
            support.beta.reset();
            support.C.reset();
            return;
        }
        const arma::uvec idx = arma::conv_to<arma::uvec>::from(support.active);
        arma::cx_mat K = J.submat(idx, idx);
        K.diag() += 1.0 / support.tau;
        K = 0.5 * (K + K.t());
        arma::cx_mat C;
        if (!arma::inv_sympd(C, K))
        {
            const double ridge = 1e-10 * std::real(arma::trace(K));
            K.diag() += ridge;
            if (!arma::inv(C, K))
                throw std::runtime_error("solve_weights: weight precision matrix is singular.");
        }
        support.C = 0.5 * (C + C.t());
        support.beta = support.C * u.elem(idx);
    }

    arma::vec flip_gains(const arma::cx_mat &J, const arma::cx_vec &u, const SupportState &support)
    {
        const arma::uword N = J.n_rows;
        const double log_odds = std::log(support.rho / (1.0 - support.rho));
        arma::vec gains(N);
        const arma::uvec idx = arma::conv_to<arma::uvec>::from(support.active);
        arma::cx_mat JS;
        arma::cx_mat JSC;
        if (!idx.is_empty())
        {
            JS = J.cols(idx);
            JSC = JS * support.C;
        }
        for (arma::uword k = 0; k < N; ++k)
        {
            double v;
            cdouble m;
            if (support.contains(k))
            {
                const arma::uword p = support.position(k);
                v = std::real(support.C(p, p));
                m = support.beta(p);
            }
            else
            {
                double schur = std::real(J(k, k)) + 1.0 / support.tau;
                cdouble residual = u(k);
                if (!idx.is_empty())
                {
                    schur -= std::real(arma::dot(JSC.row(k), arma::conj(JS.row(k))));
                    residual -= arma::dot(JS.row(k), support.beta);
                }
                v = 1.0 / schur;
                m = v * residual;
            }
            double g = (v > 0.0) ? std::log(v / support.tau) + std::norm(m) / v + log_odds
                                 : -std::numeric_limits<double>::infinity();
            gains(k) = support.contains(k) ? -g : g;
        }
        return gains;
    }

    int update_support_and_weights(const arma::cx_mat &J, const arma::cx_vec &u, SupportState &support)
    {
        const arma::uword N = J.n_rows;
        int flips = 0;
        solve_weights(J, u, support);
        for (arma::uword guard = 0; guard < 4 * N + 8; ++guard)
        {
            const arma::vec gains = flip_gains(J, u, support);
            const arma::uword k = gains.index_max();
            if (!(gains(k) > 1e-10))
                break;
            if (support.contains(k))
                support.active.erase(std::find(support.active.begin(), support.active.end(), k));
            else
                support.active.insert(std::upper_bound(support.active.begin(), support.active.end(), k), k);
            solve_weights(J, u, support);
            ++flips;
        }
        return flips;
    }

    void update_hyperparameters(SupportState &support, arma::uword candidates)
    {
        const double N = double(std::max<arma::uword>(candidates, 2));
        const double S = double(support.active.size());
        support.rho = std::clamp(S / N, 1.0 / N, 1.0 - 1.0 / N);
        if (support.active.empty())
            return;
        double energy = 0.0;
        for (arma::uword p = 0; p < support.active.size(); ++p)
            energy += std::norm(support.beta(p)) + std::real(support.C(p, p));
        support.tau = energy / S;
    }

    GaussianMessage channel_posterior(const arma::cx_mat &a_hat, const SupportState &support)
    {
        const arma::uword M = a_hat.n_rows;
        GaussianMessage post = GaussianMessage::flat(M, 0.0);
        if (support.active.empty())
            return post;
        const arma::uvec idx = arma::conv_to<arma::uvec>::from(support.active);
        const arma::cx_mat AS = a_hat.cols(idx);
        post.mean = AS * support.beta;

        // var_m = a_m^T C conj(a_m) + sum_i (|beta_i|^2 + C_ii)(1 - |a_mi|^2)
        const arma::cx_mat AC = AS * support.C;
        arma::vec second(idx.n_elem);
        for (arma::uword p = 0; p < idx.n_elem; ++p)
            second(p) = std::norm(support.beta(p)) + std::real(support.C(p, p));
        for (arma::uword m = 0; m < M; ++m)
        {
            double v = std::real(arma::dot(AC.row(m), arma::conj(AS.row(m))));
            for (arma::uword p = 0; p < idx.n_elem; ++p)
                v += second(p) * (1.0 - std::norm(AS(m, p)));
            post.var(m) = std::max(v, 0.0);
        }
        return post;
    }

    std::vector<VonMisesPosterior> set_sequential_prior(const std::vector<VonMisesPosterior> &posteriors, double lambda)
    {
        if (!(lambda > 0.0 && lambda <= 1.0))
            throw std::invalid_argument("set_sequential_prior: lambda must lie in (0, 1].");
        std::vector<VonMisesPosterior> priors = posteriors;
        for (auto &p : priors)
            p.kappa *= lambda;
        return priors;
    }

    ValseResult run_valse(const LsePseudoProblem &problem, const ValseConfig &config, ValseState *state)
    {
        problem.validate();
        const ArrayGeometry &geom = problem.geom;
        const arma::uword N = candidate_count(problem, config);
        if (problem.priors.size() > N)
            throw std::invalid_argument("run_valse: more priors than line candidates.");
        std::vector<VonMisesPosterior> priors = problem.priors;
        priors.resize(N);

        ValseState local;
        ValseState &st = state ? *state : local;
        if (!st.initialized || st.freq.size() != N || st.a_hat.n_rows != geom.size())
            cold_start(problem, priors, config, N, st);

        const arma::vec W = 1.0 / problem.v_tilde;
        const double sum_w = arma::accu(W);
        const int mode_grid = config.mode_grid_factor * std::max(geom.aperture, 1);
        arma::cx_mat J = weighted_gram(st.a_hat, W);
        arma::cx_vec u = weighted_projection(st.a_hat, W, problem.h_tilde);

        ValseResult result;
        for (int sweep = 0; sweep < config.max_sweeps; ++sweep)
        {
            result.sweeps = sweep + 1;
            const int flips = update_support_and_weights(J, u, st.support);

            double max_shift = 0.0;
            for (const arma::uword i : st.support.active)
            {
                // own weight re-fitted jointly with the frequency; the plain update only crawls along the phase ridge
                const arma::uword pi = st.support.position(i);
                arma::cx_vec r = problem.h_tilde;
                arma::cx_vec cov = arma::zeros<arma::cx_vec>(geom.size());
                for (arma::uword pj = 0; pj < st.support.active.size(); ++pj)
                {
                    if (pj == pi)
                        continue;
                    r -= st.support.beta(pj) * st.a_hat.col(st.support.active[pj]);
                    cov += st.support.C(pj, pi) * st.a_hat.col(st.support.active[pj]);
                }
                const arma::cx_vec wr = W % r;
                double theta_star = st.freq[i].mu;
                if (!std::isinf(priors[i].kappa))
                    theta_star = refine_peak(geom, wr, theta_star, two_pi / double(std::max(mode_grid, 4)));
                const cdouble b = arma::cdot(steering_vector(geom, theta_star), wr) / sum_w;
                const arma::cx_vec eta = 2.0 * (wr * std::conj(b) - W % cov);
                const VonMisesPosterior q = update_frequency(geom, eta, priors[i], mode_grid, config.newton_steps);
                max_shift = std::max(max_shift, std::abs(wrap_to_pi(q.mu - st.freq[i].mu)));
                st.freq[i] = q;
                refresh_component(i, geom, W, sum_w, problem.h_tilde, st, J, u);
            }
            update_hyperparameters(st.support, N);

            if (flips == 0 && max_shift < config.frequency_tol)
            {
                result.converged = true;
                break;
            }
        }
        solve_weights(J, u, st.support);

        result.h_post = channel_posterior(st.a_hat, st.support);
        result.support = st.support;
        result.freq = st.freq;
        result.L_hat = st.support.active.size();
        return result;
    }
}
