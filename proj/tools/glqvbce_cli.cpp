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

// Command line front end: simulate, crb, estimate, synthesize, presets

#include "glqvbce/crb.hpp"
#include "glqvbce/data_file.hpp"
#include "glqvbce/estimator.hpp"
#include "glqvbce/experiments.hpp"
#include "glqvbce/presets.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>

using namespace glqvbce;

namespace
{
    void emit(const std::string &text, const std::string &path)
    {
        if (path.empty())
        {
            std::cout << text;
            return;
        }
        std::ofstream out(path);
        if (!out)
            throw std::runtime_error("cannot write '" + path + "'.");
        out << text;
    }

    ExperimentConfig with_overrides(ExperimentConfig c, const std::optional<std::uint64_t> &seed,
                                    const std::optional<int> &trials)
    {
        if (seed)
            c.seed = *seed;
        if (trials)
            c.trials = *trials;
        c.validate();
        return c;
    }

    nlohmann::ordered_json estimate_to_json(const ChannelEstimate &e)
    {
        nlohmann::ordered_json j;
        j["L_hat"] = e.L_hat;
        j["iterations"] = e.iterations_used;
        j["converged"] = e.converged;
        j["theta"] = std::vector<double>(e.theta_hat.begin(), e.theta_hat.end());
        j["gain"] = std::vector<double>(e.g_hat.begin(), e.g_hat.end());
        j["phase"] = std::vector<double>(e.phase_hat.begin(), e.phase_hat.end());
        std::vector<double> re, im;
        for (const auto &v : e.h_hat)
        {
            re.push_back(v.real());
            im.push_back(v.imag());
        }
        j["h_re"] = re;
        j["h_im"] = im;
        return j;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"glqvbce - gridless channel estimation from quantized array snapshots"};
    app.require_subcommand(1);

    std::string config_arg, out_path, summary_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    bool serial = false;

    auto *sim = app.add_subcommand("simulate", "Run a Monte-Carlo experiment and write per-trial CSV");
    sim->add_option("config", config_arg, "Config file or preset name")->required();
    sim->add_option("--seed", seed, "Master seed override");
    sim->add_option("--trials", trials, "Trial count override")->check(CLI::PositiveNumber);
    sim->add_option("--out", out_path, "Per-trial CSV (default stdout)");
    sim->add_option("--summary", summary_path, "Aggregated CSV (default <out>.summary.csv, or stderr)");
    sim->add_flag("--serial", serial, "Run trials on one thread");

    auto *crb = app.add_subcommand("crb", "Evaluate CRB curves over the sweep");
    crb->add_option("config", config_arg, "Config file or preset name")->required();
    crb->add_option("--seed", seed, "Master seed override");
    crb->add_option("--trials", trials, "Channel draws per sweep point")->check(CLI::PositiveNumber);
    crb->add_option("--out", out_path, "CSV output (default stdout)");
    crb->add_flag("--serial", serial, "Run on one thread");

    std::string data_path, pilot_path, variant_name = "GL-QVBCE";
    double sigma2 = -1.0, power = 1.0;
    int bits = 1, aperture = 0;
    auto *est = app.add_subcommand("estimate", "Estimate the channel from an M x T matrix file");
    est->add_option("data", data_path, "Received samples Y (M x T)")->required();
    est->add_option("--pilot", pilot_path, "Pilot file (T x 1); all-ones when omitted");
    est->add_option("--sigma2", sigma2, "Noise variance")->required()->check(CLI::PositiveNumber);
    est->add_option("--power", power, "Total received power P")->check(CLI::PositiveNumber);
    est->add_option("--bits", bits, "Quantizer bit depth applied to Y (0 = none)")->check(CLI::Range(0, 16));
    est->add_option("--variant", variant_name, "GL-QVBCE, GL-VBCE, GL-VBCE-AQNM or LS");
    est->add_option("--aperture", aperture, "Aperture N (default M)");
    est->add_option("--out", out_path, "JSON output (default stdout)");

    int syn_M = 32, syn_L = 2, syn_T = 2;
    double syn_snr = 10.0;
    std::uint64_t syn_seed = 1;
    std::string truth_path;
    auto *syn = app.add_subcommand("synthesize", "Write a random observation, its pilots and the true channel");
    syn->add_option("--M", syn_M, "Antennas (ULA)")->check(CLI::PositiveNumber);
    syn->add_option("--L", syn_L, "Paths")->check(CLI::PositiveNumber);
    syn->add_option("--T", syn_T, "Pilots")->check(CLI::PositiveNumber);
    syn->add_option("--snr", syn_snr, "SNR in dB");
    syn->add_option("--power", power, "Total received power P")->check(CLI::PositiveNumber);
    syn->add_option("--seed", syn_seed, "Seed");
    syn->add_option("--out", out_path, "Observation file")->required();
    syn->add_option("--pilot-out", pilot_path, "Pilot file")->required();
    syn->add_option("--truth-out", truth_path, "True channel as JSON");

    auto *pre = app.add_subcommand("presets", "List presets, or print one");
    std::string preset_name;
    pre->add_option("name", preset_name, "Preset to print");

    CLI11_PARSE(app, argc, argv);
    const Exec exec = serial ? Exec::serial : Exec::parallel;

    try
    {
        if (*sim)
        {
            const ExperimentConfig c = with_overrides(resolve_config(config_arg), seed, trials);
            const auto records = run_experiment(c, exec);
            emit(records_csv(c, records), out_path);
            const std::string summary = summary_csv(c, summarize(c, records));
            if (!summary_path.empty())
                emit(summary, summary_path);
            else if (!out_path.empty())
                emit(summary, out_path + ".summary.csv");
            else
                std::cerr << summary;
        }
        else if (*crb)
        {
            const ExperimentConfig c = with_overrides(resolve_config(config_arg), seed, trials);
            emit(crb_csv(c, run_crb_curves(c, exec)), out_path);
        }
        else if (*est)
        {
            const arma::cx_mat Y = read_matrix(data_path);
            PilotBlock pilot;
            pilot.x = pilot_path.empty() ? arma::cx_vec(Y.n_cols, arma::fill::ones) : arma::cx_vec(arma::vectorise(read_matrix(pilot_path)));
            if (pilot.length() != Y.n_cols)
                throw std::invalid_argument("pilot length does not match the columns of Y.");
            const int M = int(Y.n_rows);
            const ArrayGeometry geom = ArrayGeometry::ula(M);
            ArrayGeometry g = geom;
            if (aperture > 0)
                g = ArrayGeometry::sparse(geom.indices, aperture);
            const EstimationSetup setup{g, pilot, sigma2, power};
            const arma::cx_vec y = arma::vectorise(Y);
            EstimatorConfig ec;
            ec.variant = variant_from_string(variant_name);
            const QuantizerSpec spec = bits == 0 ? QuantizerSpec::identity()
                                       : bits == 1 ? QuantizerSpec::one_bit()
                                                   : QuantizerSpec::uniform(bits, std::sqrt(power));
            ChannelEstimate e;
            switch (ec.variant)
            {
            case Variant::ls:
                e = estimate_ls(y, pilot);
                break;
            case Variant::gl_vbce:
                e = estimate(Observation::unquantized(y, sigma2), setup, ec);
                break;
            case Variant::gl_vbce_aqnm:
                if (spec.is_identity())
                    throw std::invalid_argument("GL-VBCE-AQNM needs --bits >= 1.");
                e = estimate_aqnm(spec, quantize_complex(spec, y), setup, ec);
                break;
            case Variant::gl_qvbce:
                e = estimate(spec.is_identity() ? Observation::unquantized(y, sigma2) : Observation::quantized(spec, y, sigma2),
                             setup, ec);
                break;
            }
            emit(estimate_to_json(e).dump(2) + "\n", out_path);
        }
        else if (*syn)
        {
            Rng rng(syn_seed);
            GroundTruthChannel truth = generate_channel(power, syn_L, rng);
            const ArrayGeometry geom = ArrayGeometry::ula(syn_M);
            synthesize_channel(geom, truth);
            const PilotBlock pilot = draw_pilots(syn_T, rng);
            const double s2 = power / std::pow(10.0, syn_snr / 10.0);
            const arma::cx_vec y = synthesize_observation(truth, pilot, s2, rng);
            write_matrix(out_path, arma::reshape(y, syn_M, syn_T));
            write_matrix(pilot_path, arma::cx_mat(pilot.x));
            if (!truth_path.empty())
            {
                ChannelEstimate t;
                t.h_hat = truth.h;
                t.L_hat = truth.paths();
                t.theta_hat = truth.theta;
                t.g_hat = truth.gain;
                t.phase_hat = truth.phase;
                auto j = estimate_to_json(t);
                j.erase("iterations");
                j.erase("converged");
                j["sigma2"] = s2;
                emit(j.dump(2) + "\n", truth_path);
            }
        }
        else if (*pre)
        {
            if (preset_name.empty())
                for (const auto &n : list_presets())
                    std::cout << n << "\n";
            else
                std::cout << serialize_config(load_preset(preset_name));
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
