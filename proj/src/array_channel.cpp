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

#include "glqvbce/array_channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace glqvbce
{
    ArrayGeometry ArrayGeometry::ula(int M)
    {
        if (M < 1)
            throw std::invalid_argument("ArrayGeometry::ula: need at least one antenna.");
        ArrayGeometry g;
        g.aperture = M;
        g.indices.resize(std::size_t(M));
        for (int m = 0; m < M; ++m)
            g.indices[std::size_t(m)] = m;
        return g;
    }

    ArrayGeometry ArrayGeometry::sparse(std::vector<int> indices, int aperture)
    {
        ArrayGeometry g{std::move(indices), aperture};
        g.validate();
        return g;
    }

    void ArrayGeometry::validate() const
    {
        if (indices.empty())
            throw std::invalid_argument("ArrayGeometry: empty index set.");
        for (std::size_t i = 0; i < indices.size(); ++i)
        {
            if (indices[i] < 0 || indices[i] >= aperture)
                throw std::invalid_argument("ArrayGeometry: index " + std::to_string(indices[i]) + " outside aperture.");
            if (i > 0 && indices[i] <= indices[i - 1])
                throw std::invalid_argument("ArrayGeometry: indices must be strictly increasing.");
        }
    }

    GroundTruthChannel GroundTruthChannel::from_polar(const arma::vec &theta, const arma::vec &gain, const arma::vec &phase)
    {
        if (theta.n_elem != gain.n_elem || theta.n_elem != phase.n_elem)
            throw std::invalid_argument("GroundTruthChannel: theta, gain and phase lengths differ.");
        GroundTruthChannel t;
        t.theta = theta;
        t.gain = gain;
        t.phase = phase;
        t.beta.set_size(theta.n_elem);
        for (arma::uword l = 0; l < theta.n_elem; ++l)
            t.beta(l) = std::polar(gain(l), phase(l));
        return t;
    }

    void PilotBlock::validate() const
    {
        if (x.n_elem == 0)
            throw std::invalid_argument("PilotBlock: empty pilot sequence.");
        for (const auto &v : x)
            if (std::abs(v) == 0.0)
                throw std::invalid_argument("PilotBlock: zero pilot symbol.");
    }

    arma::cx_vec steering_vector(const ArrayGeometry &geom, double theta)
    {
        if (!std::isfinite(theta))
            throw std::invalid_argument("steering_vector: non-finite frequency.");
        arma::cx_vec a(geom.size());
        for (arma::uword i = 0; i < geom.size(); ++i)
            a(i) = std::polar(1.0, double(geom.indices[i]) * theta);
        return a;
    }

    arma::cx_mat steering_matrix(const ArrayGeometry &geom, const arma::vec &theta)
    {
        arma::cx_mat A(geom.size(), theta.n_elem);
        for (arma::uword l = 0; l < theta.n_elem; ++l)
            A.col(l) = steering_vector(geom, theta(l));
        return A;
    }

    arma::cx_vec synthesize_channel(const ArrayGeometry &geom, GroundTruthChannel &truth)
    {
        if (truth.beta.n_elem != truth.theta.n_elem)
            throw std::invalid_argument("synthesize_channel: beta and theta lengths differ.");
        arma::cx_vec h(geom.size(), arma::fill::zeros);
        for (arma::uword l = 0; l < truth.paths(); ++l)
            h += truth.beta(l) * steering_vector(geom, truth.theta(l));
        truth.h = h;
        return h;
    }

    arma::cx_vec complex_normal(arma::uword n, double var, Rng &rng)
    {
        if (var == 0.0)
            return arma::cx_vec(n, arma::fill::zeros);
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * var));
        arma::cx_vec w(n);
        for (arma::uword i = 0; i < n; ++i)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            w(i) = cdouble(re, im);
        }
        return w;
    }

    arma::cx_vec synthesize_observation(const GroundTruthChannel &truth, const PilotBlock &pilot,
                                        double sigma2, Rng &rng)
    {
        if (!(sigma2 >= 0.0))
            throw std::invalid_argument("synthesize_observation: noise variance must be non-negative.");
        const arma::uword M = truth.h.n_elem, T = pilot.length();
        arma::cx_vec y = complex_normal(M * T, sigma2, rng);
        for (arma::uword t = 0; t < T; ++t)
            y.subvec(t * M, t * M + M - 1) += truth.h * pilot.x(t);
        return y;
    }

    cdouble circular_moment(const VonMisesPosterior &post, int m)
    {
        if (!(post.kappa >= 0.0))
            throw std::domain_error("circular_moment: negative concentration.");
        if (std::isinf(post.kappa))
            return std::polar(1.0, double(m) * post.mu);
        return std::polar(bessel_ratio(post.kappa, m), double(m) * post.mu);
    }

    arma::cx_vec expected_steering_vector(const ArrayGeometry &geom, const VonMisesPosterior &post)
    {
        arma::cx_vec a(geom.size());
        if (std::isinf(post.kappa))
        {
            for (arma::uword i = 0; i < geom.size(); ++i)
                a(i) = std::polar(1.0, double(geom.indices[i]) * post.mu);
            return a;
        }
        const arma::vec r = bessel_ratios(post.kappa, arma::uword(geom.max_index()));
        for (arma::uword i = 0; i < geom.size(); ++i)
        {
            const int m = geom.indices[i];
            a(i) = std::polar(r(arma::uword(m)), double(m) * post.mu);
        }
        return a;
    }
}
