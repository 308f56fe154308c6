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

#ifndef GLQVBCE_ESTIMATOR_HPP
#define GLQVBCE_ESTIMATOR_HPP

#include "glqvbce/array_channel.hpp"
#include "glqvbce/ep_messages.hpp"
#include "glqvbce/execution.hpp"
#include "glqvbce/mmse_module.hpp"
#include "glqvbce/quantizer.hpp"
#include "glqvbce/valse.hpp"

#include <armadillo>
#include <string>
#include <vector>

namespace glqvbce
{
    enum class Variant
    {
        gl_qvbce,     // quantized likelihood through the MMSE module
        gl_vbce,      // unquantized data
        gl_vbce_aqnm, // quantized data treated as Gaussian with inflated noise
        ls            // per-antenna pilot-matched average
    };

    std::string to_string(Variant v);
    Variant variant_from_string(const std::string &name); // throws std::invalid_argument

    struct EstimatorConfig
    {
        Variant variant = Variant::gl_qvbce;
        int max_outer_iters = 20;
        double outer_tol = 1e-6;     // relative change of the channel estimate
        ValseConfig valse;
        double damping = 1.0;        // 1 = undamped message updates
        bool divide_z_by_previous_message = false; // divide the z posterior by the previous B->z message instead of the MMSE extrinsic
        double initial_z_variance_scale = 1.0;     // initial B->z variance is scale * (P + sigma2)
        bool record_history = false;
        Exec exec = Exec::serial;
    };

    // Known quantities shared by every estimator
    struct EstimationSetup
    {
        ArrayGeometry geom;
        PilotBlock pilot;
        double sigma2 = 1.0; // noise variance
        double power = 1.0;  // total received power P
    };

    struct ChannelEstimate
    {
        arma::cx_vec h_hat;
        arma::vec h_var;
        arma::uword L_hat = 0;
        arma::vec theta_hat; // ascending
        arma::vec g_hat;
        arma::vec phase_hat; // in (-pi, pi]
        std::vector<VonMisesPosterior> freq_posteriors;
        int iterations_used = 0;
        bool converged = false;
        std::vector<arma::cx_vec> history; // channel estimate after every outer iteration (if recorded)
    };

    // GL-QVBCE on quantized codes, or GL-VBCE when obs carries the identity quantizer.
    // `priors` are frequency priors for the first line candidates (empty = uninformative).
    ChannelEstimate estimate(const Observation &obs, const EstimationSetup &setup, const EstimatorConfig &config,
                             const std::vector<VonMisesPosterior> &priors = {});

    // Quantized codes mapped to representation values and run through GL-VBCE with noise sigma2 + sigma_q^2
    ChannelEstimate estimate_aqnm(const QuantizerSpec &spec, const QuantizedSamples &codes, const EstimationSetup &setup,
                                  const EstimatorConfig &config);

    // Pilot-matched least squares, h = Y x^* / (x^H x)
    ChannelEstimate estimate_ls(const arma::cx_vec &y, const PilotBlock &pilot);

    // One pilot block of a sequential stream
    struct StreamBlock
    {
        Observation obs;
        PilotBlock pilot;
    };

    // Block 1 uses uninformative priors; block t > 1 uses the damped frequency posteriors of block t - 1
    std::vector<ChannelEstimate> estimate_sequential(const std::vector<StreamBlock> &blocks, const ArrayGeometry &geom,
                                                     double sigma2, double power, double lambda,
                                                     const EstimatorConfig &config);

    // Representation scale applied to 1-bit codes by AQNM: half the uniform step at B = 1, 3 sigma_z / (2 sqrt 2)
    double one_bit_representation_scale(double power);
}

#endif
