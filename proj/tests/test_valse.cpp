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

#include "catch_amalgamated.hpp"
#include "glqvbce/valse.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <numbers>

using namespace glqvbce;
using std::numbers::pi;

namespace
{
    double log_density(const ArrayGeometry &g, const arma::cx_vec &eta, const VonMisesPosterior &prior, double th)
    {
        return std::real(arma::cdot(eta, steering_vector(g, th))) + prior.kappa * std::cos(th - prior.mu);
    }

    // random expected steering vectors from concentrated beliefs
    arma::cx_mat random_a_hat(const ArrayGeometry &g, arma::uword N, Rng &rng)
    {
        std::uniform_real_distribution<double> u(-pi, pi), k(5.0, 200.0);
        arma::cx_mat A(g.size(), N);
        for (arma::uword n = 0; n < N; ++n)
            A.col(n) = expected_steering_vector(g, {u(rng), k(rng)});
        return A;
    }
}

TEST_CASE("log-density coefficients reproduce the frequency log density")
{
    Rng rng(4);
    const ArrayGeometry g = ArrayGeometry::sparse({0, 1, 3, 6}, 8);
    const arma::cx_vec eta = complex_normal(4, 4.0, rng);
    const VonMisesPosterior prior{0.8, 2.5};
    const arma::cx_vec c = frequency_log_density(g, eta, prior);
    for (double th = -3.0; th < 3.1; th += 0.25)
    {
        cdouble s = 0.0;
        for (arma::uword k = 0; k < c.n_elem; ++k)
            s += c(k) * std::polar(1.0, double(k) * th);
        CHECK(std::real(s) == Catch::Approx(log_density(g, eta, prior, th)).margin(1e-12));
    }
}

TEST_CASE("frequency update finds the global mode and its curvature")
{
    Rng rng(8);
    for (int rep = 0; rep < 20; ++rep)
    {
        const ArrayGeometry g = ArrayGeometry::ula(16);
        std::uniform_real_distribution<double> u(-pi, pi);
        const double th0 = u(rng);
        // informative eta: a strong line at th0 plus noise
        const arma::cx_vec eta = 20.0 * steering_vector(g, th0) + complex_normal(16, 4.0, rng);
        const VonMisesPosterior prior = rep % 2 ? VonMisesPosterior{u(rng), 3.0} : VonMisesPosterior{};
        const VonMisesPosterior post = update_frequency(g, eta, prior, 64);

        // brute-force grid plus golden refinement as reference mode
        double best = -1e300, arg = 0.0;
        for (int k = 0; k < 1 << 16; ++k)
        {
            const double th = -pi + 2.0 * pi * k / double(1 << 16);
            const double f = log_density(g, eta, prior, th);
            if (f > best)
            {
                best = f;
                arg = th;
            }
        }
        INFO("rep " << rep);
        CHECK(std::abs(wrap_to_pi(post.mu - arg)) < 2.0 * pi / double(1 << 16));
        CHECK(log_density(g, eta, prior, post.mu) >= best - 1e-9);

        const double h = 1e-4;
        const double d2 = (log_density(g, eta, prior, post.mu + h) - 2.0 * log_density(g, eta, prior, post.mu) +
                           log_density(g, eta, prior, post.mu - h)) / (h * h);
        CHECK(post.kappa == Catch::Approx(-d2).epsilon(1e-4));
    }
}

TEST_CASE("weighted Gram and projection")
{
    Rng rng(9);
    const ArrayGeometry g = ArrayGeometry::ula(7);
    const arma::cx_mat A = random_a_hat(g, 5, rng);
    const arma::vec W = arma::randu<arma::vec>(7) + 0.1;
    const arma::cx_vec h = complex_normal(7, 1.0, rng);
    const arma::cx_mat J = weighted_gram(A, W);
    const arma::cx_vec u = weighted_projection(A, W, h);
    const arma::cx_mat ref = A.t() * arma::diagmat(arma::conv_to<arma::cx_vec>::from(W)) * A;
    for (arma::uword i = 0; i < 5; ++i)
        for (arma::uword j = 0; j < 5; ++j)
        {
            const cdouble r = i == j ? cdouble(arma::accu(W), 0.0) : ref(i, j);
            CHECK(std::abs(J(i, j) - r) < 1e-12);
        }
    CHECK(arma::norm(u - A.t() * (W % h)) < 1e-12);
}

TEST_CASE("flip gains equal exact objective differences")
{
    Rng rng(10);
    for (int rep = 0; rep < 10; ++rep)
    {
        const arma::uword N = 6;
        const ArrayGeometry g = ArrayGeometry::ula(8);
        const arma::cx_mat A = random_a_hat(g, N, rng);
        const arma::vec W = 1.0 / (0.05 + arma::randu<arma::vec>(8));
        const arma::cx_vec h = A.cols(0, 1) * complex_normal(2, 1.0, rng) + complex_normal(8, 0.1, rng);
        const arma::cx_mat J = weighted_gram(A, W);
        const arma::cx_vec u = weighted_projection(A, W, h);
        SupportState s;
        s.rho = 0.3;
        s.tau = 0.8;
        s.active = {1, 4};
        solve_weights(J, u, s);
        const arma::vec gains = flip_gains(J, u, s);
        const double base = oracle::support_objective(J, u, arma::uvec{1, 4}, s.rho, s.tau);
        for (arma::uword k = 0; k < N; ++k)
        {
            std::vector<arma::uword> S = s.active;
            if (s.contains(k))
                S.erase(std::find(S.begin(), S.end(), k));
            else
                S.insert(std::upper_bound(S.begin(), S.end(), k), k);
            const double d = oracle::support_objective(J, u, arma::uvec(S), s.rho, s.tau) - base;
            CHECK(gains(k) == Catch::Approx(d).epsilon(1e-9).margin(1e-9));
        }

        // weights are the Gaussian posterior on the support
        const arma::uvec S = {1, 4};
        const arma::cx_mat K = J.submat(S, S) + arma::eye<arma::cx_mat>(2, 2) / s.tau;
        CHECK(arma::norm(s.C - arma::inv(K), "fro") < 1e-10);
        CHECK(arma::norm(s.beta - arma::solve(K, arma::cx_vec(u.elem(S)))) < 1e-10);
    }
}

TEST_CASE("greedy support reaches a near-optimal subset")
{
    Rng rng(12);
    int top1 = 0;
    for (int rep = 0; rep < 30; ++rep)
    {
        const arma::uword N = 5 + rep % 2, M = 6 + rep % 3;
        const ArrayGeometry g = ArrayGeometry::ula(int(M));
        const arma::cx_mat A = random_a_hat(g, N, rng);
        const arma::vec W = 1.0 / (0.1 + arma::randu<arma::vec>(M));
        const arma::cx_vec h = A.cols(0, 1) * complex_normal(2, 1.0, rng) + complex_normal(M, 0.2, rng);
        const arma::cx_mat J = weighted_gram(A, W);
        const arma::cx_vec u = weighted_projection(A, W, h);
        SupportState s;
        s.rho = 0.4;
        s.tau = 1.0;
        update_support_and_weights(J, u, s);
        const double got = oracle::support_objective(J, u, arma::uvec(s.active), s.rho, s.tau);
        std::vector<double> all = oracle::all_support_objectives(J, u, s.rho, s.tau);
        std::sort(all.rbegin(), all.rend());
        CHECK(got >= all[2] - 1e-9);
        top1 += got >= all[0] - 1e-9;
        // local optimality: no single flip improves
        CHECK(flip_gains(J, u, s).max() <= 1e-10);
    }
    CHECK(top1 >= 20);
}

TEST_CASE("hyperparameter update")
{
    SupportState s;
    s.active = {0, 3};
    s.beta = {{1.0, 0.0}, {0.0, 2.0}};
    s.C = arma::cx_mat{{{0.1, 0.0}, {0.0, 0.0}}, {{0.0, 0.0}, {0.3, 0.0}}};
    update_hyperparameters(s, 10);
    CHECK(s.rho == Catch::Approx(0.2));
    CHECK(s.tau == Catch::Approx((1.1 + 4.3) / 2.0));
    SupportState e;
    e.tau = 7.0;
    update_hyperparameters(e, 10);
    CHECK(e.rho == Catch::Approx(0.1));
    CHECK(e.tau == 7.0);
}

TEST_CASE("natural parameter of a frequency")
{
    Rng rng(13);
    const ArrayGeometry g = ArrayGeometry::ula(5);
    const arma::cx_mat A = random_a_hat(g, 3, rng);
    const arma::vec W = arma::randu<arma::vec>(5) + 0.5;
    const arma::cx_vec h = complex_normal(5, 1.0, rng);
    SupportState s;
    s.active = {0, 2};
    s.beta = {{0.5, 0.1}, {-0.3, 0.8}};
    s.C = arma::cx_mat{{{0.2, 0.0}, {0.05, 0.02}}, {{0.05, -0.02}, {0.1, 0.0}}};
    const arma::cx_vec eta = frequency_natural_parameter(2, h, W, A, s);
    // 2 W (h conj(b_2) - a_0 (C_02 + b_0 conj(b_2)))
    const arma::cx_vec ref = 2.0 * (W % (h * std::conj(s.beta(1)) - A.col(0) * (s.C(0, 1) + s.beta(0) * std::conj(s.beta(1)))));
    CHECK(arma::norm(eta - ref) < 1e-13);
}

TEST_CASE("channel posterior moments match Monte Carlo")
{
    Rng rng(14);
    const ArrayGeometry g = ArrayGeometry::ula(4);
    const std::vector<VonMisesPosterior> post = {{0.4, 3.0}, {-1.5, 8.0}};
    arma::cx_mat A(4, 2);
    for (int k = 0; k < 2; ++k)
        A.col(k) = expected_steering_vector(g, post[k]);
    SupportState s;
    s.active = {0, 1};
    s.beta = {{0.7, 0.2}, {-0.4, 0.5}};
    s.C = arma::cx_mat{{{0.05, 0.0}, {0.01, 0.02}}, {{0.01, -0.02}, {0.08, 0.0}}};
    const GaussianMessage m = channel_posterior(A, s);

    // sample theta by rejection and w from CN(beta, C)
    std::uniform_real_distribution<double> u(-pi, pi), u01(0.0, 1.0);
    auto draw = [&](const VonMisesPosterior &p)
    {
        while (true)
        {
            const double th = u(rng);
            if (u01(rng) < std::exp(p.kappa * (std::cos(th - p.mu) - 1.0)))
                return th;
        }
    };
    const arma::cx_mat Lc = arma::chol(s.C, "lower");
    const int n = 200000;
    arma::cx_vec sum(4, arma::fill::zeros);
    arma::vec sq(4, arma::fill::zeros);
    for (int k = 0; k < n; ++k)
    {
        const arma::cx_vec w = s.beta + Lc * complex_normal(2, 1.0, rng);
        const arma::cx_vec hh = w(0) * steering_vector(g, draw(post[0])) + w(1) * steering_vector(g, draw(post[1]));
        sum += hh;
        sq += arma::square(arma::abs(hh));
    }
    const arma::cx_vec mean = sum / double(n);
    const arma::vec var = sq / double(n) - arma::square(arma::abs(mean));
    CHECK(arma::norm(m.mean - A * s.beta) < 1e-14);
    CHECK(arma::norm(mean - m.mean) < 0.01);
    for (arma::uword i = 0; i < 4; ++i)
        CHECK(var(i) == Catch::Approx(m.var(i)).epsilon(0.03));
}

TEST_CASE("run_valse recovers well separated lines")
{
    const ArrayGeometry g = ArrayGeometry::ula(32);
    GroundTruthChannel t = GroundTruthChannel::from_polar({-1.1, 0.9}, {1.0, 0.7}, {0.3, -2.0});
    synthesize_channel(g, t);
    Rng rng(15);
    LsePseudoProblem p{t.h + complex_normal(32, 1e-4, rng), arma::vec(32, arma::fill::value(1e-4)), g, {}};
    const ValseResult r = run_valse(p, ValseConfig{});
    REQUIRE(r.L_hat == 2);
    std::vector<double> th;
    for (arma::uword i : r.support.active)
        th.push_back(r.freq[i].mu);
    std::sort(th.begin(), th.end());
    CHECK(std::abs(th[0] + 1.1) < 1e-3);
    CHECK(std::abs(th[1] - 0.9) < 1e-3);
    CHECK(std::pow(arma::norm(r.h_post.mean - t.h) / arma::norm(t.h), 2) < 1e-4);

    // a warm start from the converged state stays put
    ValseState state;
    run_valse(p, ValseConfig{}, &state);
    REQUIRE(state.initialized);
    const ValseResult again = run_valse(p, ValseConfig{}, &state);
    CHECK(again.L_hat == 2);
    CHECK(again.sweeps <= 3);
}

TEST_CASE("sequential prior damping")
{
    const auto p = set_sequential_prior({{0.5, 100.0}, {-1.0, 20.0}}, 0.1);
    CHECK(p[0].mu == 0.5);
    CHECK(p[0].kappa == Catch::Approx(10.0));
    CHECK(p[1].kappa == Catch::Approx(2.0));
    CHECK_THROWS(set_sequential_prior({{0.0, 1.0}}, 0.0));
}
