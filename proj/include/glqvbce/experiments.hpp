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

#ifndef GLQVBCE_EXPERIMENTS_HPP
#define GLQVBCE_EXPERIMENTS_HPP

#include "glqvbce/array_channel.hpp"
#include "glqvbce/execution.hpp"
#include "glqvbce/experiment_config.hpp"

#include <optional>
#include <string>
#include <vector>

namespace glqvbce
{
    // LoS path plus L - 1 weaker paths; gains Normal(sqrt(0.45 P_l), 0.05 P_l) with negative draws redrawn,
    // uniform phases and DOAs uniform in [-pi/2, pi/2)
    GroundTruthChannel generate_channel(double power, int L, Rng &rng);

    // Two paths at -30 and 60 degrees with beta = [0.8 exp(-j 0.3 pi), 0.6 exp(j 0.2 pi)]
    GroundTruthChannel fixed_two_path_channel();

    // One path at theta = 1, unit gain scaled to power, phase 0.5
    GroundTruthChannel single_tone_channel(double power);

    // M antennas from an aperture of N: the full ULA when M == N, otherwise index 0 plus a uniform random subset
    ArrayGeometry draw_geometry(int N, int M, Rng &rng);

    // Unit-modulus pilots with uniform phases
    PilotBlock draw_pilots(int T, Rng &rng);

    // perm[l] is the estimated path matched to true path l. Minimises the total wrapped frequency distance,
    // ties go to the lexicographically smallest permutation. Throws if the sizes differ.
    std::vector<arma::uword> match_paths(const arma::vec &theta_true, const arma::vec &theta_est);

    // Independent generator for (master seed, sweep point, trial)
    Rng trial_rng(std::uint64_t master, std::uint64_t point, std::uint64_t trial);

    struct MetricsRecord
    {
        std::string variant;
        double sweep_value = 0.0;
        int trial = 0;
        double nmse_linear = 0.0;
        int L_hat = -1;                   // -1 when the variant does not estimate the model order
        bool success = false;             // L_hat == L and NMSE <= -5 dB
        std::optional<double> mse_theta;  // means over paths, available when L_hat == L
        std::optional<double> mse_g;
        std::optional<double> mse_phi;
        std::vector<double> nmse_iterations;
    };

    struct SummaryRow
    {
        std::string variant;
        double sweep_value = 0.0;
        int trials = 0;
        double nmse_db = 0.0;             // 10 log10 of the mean linear NMSE
        double success_rate = 0.0;
        std::optional<double> mse_theta;  // averaged over successful trials only
        std::optional<double> mse_g;
        std::optional<double> mse_phi;
        std::vector<double> nmse_iterations_db;
    };

    // All records of one trial at one sweep point (several points for a pilot_index sweep)
    std::vector<MetricsRecord> run_trial(const ExperimentConfig &config, std::size_t point, int trial);

    // Records ordered by (sweep point, trial, variant)
    std::vector<MetricsRecord> run_experiment(const ExperimentConfig &config, Exec exec = Exec::parallel);

    std::vector<SummaryRow> summarize(const ExperimentConfig &config, const std::vector<MetricsRecord> &records);

    std::string records_csv(const ExperimentConfig &config, const std::vector<MetricsRecord> &records);
    std::string summary_csv(const ExperimentConfig &config, const std::vector<SummaryRow> &rows);

    struct CrbRow
    {
        std::string variant;
        double sweep_value = 0.0;
        double crb_theta_db = 0.0; // per-parameter CRB averaged over paths and channel draws
        double crb_g_db = 0.0;
        double crb_phi_db = 0.0;
        int singular = 0;          // draws whose FIM could not be inverted
    };

    // CRB variants of the config ("CRB", "CRB:B"); 1-bit, 2-bit and unquantized when none are listed
    std::vector<CrbRow> run_crb_curves(const ExperimentConfig &config, Exec exec = Exec::parallel);
    std::string crb_csv(const ExperimentConfig &config, const std::vector<CrbRow> &rows);
}

#endif
