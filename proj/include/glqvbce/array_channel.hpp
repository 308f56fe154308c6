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

#ifndef GLQVBCE_ARRAY_CHANNEL_HPP
#define GLQVBCE_ARRAY_CHANNEL_HPP

#include "glqvbce/von_mises.hpp"

#include <armadillo>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace glqvbce
{
    using cdouble = std::complex<double>;
    using Rng = std::mt19937_64;

    // Linear array with antennas at integer positions (half-wavelength units) inside an aperture
    // of N virtual elements. N == M gives the full uniform linear array.
    struct ArrayGeometry
    {
        std::vector<int> indices; // strictly increasing, within [0, aperture)
        int aperture = 0;         // N

        static ArrayGeometry ula(int M);
        static ArrayGeometry sparse(std::vector<int> indices, int aperture);

        arma::uword size() const { return arma::uword(indices.size()); }
        int max_index() const { return indices.empty() ? 0 : indices.back(); }
        void validate() const; // throws std::invalid_argument
    };

    // Multipath channel h = sum_l beta_l a(theta_l), beta_l = g_l exp(j varphi_l)
    struct GroundTruthChannel
    {
        arma::vec theta;  // Frequencies theta_l = pi sin(doa_l), in [-pi, pi)
        arma::vec gain;   // g_l > 0
        arma::vec phase;  // varphi_l in (-pi, pi]
        arma::cx_vec beta;
        arma::cx_vec h;   // Filled by synthesize_channel

        static GroundTruthChannel from_polar(const arma::vec &theta, const arma::vec &gain, const arma::vec &phase);
        arma::uword paths() const { return theta.n_elem; }
    };

    // Known pilot symbols x_1 .. x_T
    struct PilotBlock
    {
        arma::cx_vec x;

        arma::uword length() const { return x.n_elem; }
        void validate() const;
    };

    inline double doa_to_frequency(double doa) { return std::numbers::pi * std::sin(doa); }
    inline double frequency_to_doa(double theta) { return std::asin(theta / std::numbers::pi); }

    // a(theta) with components exp(j m_i theta)
    arma::cx_vec steering_vector(const ArrayGeometry &geom, double theta);

    // [a(theta_1), ..., a(theta_L)]
    arma::cx_mat steering_matrix(const ArrayGeometry &geom, const arma::vec &theta);

    // Returns sum_l beta_l a(theta_l) and stores it in truth.h
    arma::cx_vec synthesize_channel(const ArrayGeometry &geom, GroundTruthChannel &truth);

    // vec(h x^T) + w, w ~ CN(0, sigma2 I). Entry (m, t) sits at index t * M + m.
    arma::cx_vec synthesize_observation(const GroundTruthChannel &truth, const PilotBlock &pilot,
                                        double sigma2, Rng &rng);

    // Draws n circular complex Gaussian samples with total variance var per entry
    arma::cx_vec complex_normal(arma::uword n, double var, Rng &rng);

    // E[exp(j m theta)] under a von Mises belief
    cdouble circular_moment(const VonMisesPosterior &post, int m);

    // E[a(theta)] under a von Mises belief, all components at once
    arma::cx_vec expected_steering_vector(const ArrayGeometry &geom, const VonMisesPosterior &post);
}

#endif
