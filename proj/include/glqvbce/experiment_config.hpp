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

#ifndef GLQVBCE_EXPERIMENT_CONFIG_HPP
#define GLQVBCE_EXPERIMENT_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace glqvbce
{
    // One Monte-Carlo experiment. Stored as JSON with keys equal to the field names.
    struct ExperimentConfig
    {
        std::string scenario = "custom";
        std::string note;                         // free text describing the run
        std::string sweep_name = "snr_db";        // snr_db | bit_depth | M | L | T | pilot_index
        std::vector<double> sweep_values = {0.0};
        int N = 64;                               // aperture
        int M = 64;                               // active antennas
        int L = 2;
        int T = 2;
        double snr_db = 0.0;
        int bit_depth = 1;                        // default for variants without an explicit ":B"
        double lambda = 0.1;                      // concentration damping of sequential priors
        int trials = 50;
        std::uint64_t seed = 1;
        std::string channel_model = "random";     // random | fixed | single_tone
        std::vector<std::string> variants = {"LS", "GL-VBCE", "GL-QVBCE"};
        int max_outer_iters = 20;
        bool record_iterations = false;
        double power = 1.0;

        bool operator==(const ExperimentConfig &) const = default;
        void validate() const; // throws std::invalid_argument
    };

    // Variant token "NAME" or "NAME:B". NAME is one of LS, GL-VBCE, GL-QVBCE, GL-VBCE-AQNM,
    // Seq-GL-QVBCE, Seq-GL-VBCE or CRB. B = 0 selects infinite resolution.
    struct VariantSpec
    {
        std::string label; // token as written
        std::string name;
        int bits = -1;     // -1 = take bit_depth from the config

        bool sequential() const { return name.rfind("Seq-", 0) == 0; }
        bool is_crb() const { return name == "CRB"; }
        int resolved_bits(int config_bits) const { return bits < 0 ? config_bits : bits; }
    };
    VariantSpec parse_variant(const std::string &token);

    ExperimentConfig parse_config(const std::string &json_text);
    std::string serialize_config(const ExperimentConfig &config);
    ExperimentConfig load_config(const std::string &path);

    // Copy of `config` with the sweep variable set to `value`
    ExperimentConfig apply_sweep_value(const ExperimentConfig &config, double value);
}

#endif
