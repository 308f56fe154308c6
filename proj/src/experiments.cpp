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

#include "glqvbce/experiments.hpp"
#include "glqvbce/crb.hpp"
#include "glqvbce/estimator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace glqvbce
{
    using std::numbers::pi;

    GroundTruthChannel generate_channel(double power, int L, Rng &rng)
    {
        if (L < 1 || !(power > 0.0))
            throw std::invalid_argument("generate_channel: need L >= 1 and P > 0.");
        std::uniform_real_distribution<double> doa(-0.5 * pi, 0.5 * pi), phase(-pi, pi);
        arma::vec theta(L), gain(L), ph(L);
        for (int l = 0; l < L; ++l)
        {
            const double share = l == 0 ? power : power / double(L - 1);
            std::normal_distribution<double> g(std::sqrt(0.45 * share), std::sqrt(0.05 * share));
            double v = g(rng);
            while (v <= 0.0)
                v = g(rng);
            gain(l) = v;
            ph(l) = phase(rng);
            theta(l) = doa_to_frequency(doa(rng));
        }
        return GroundTruthChannel::from_polar(theta, gain, ph);
    }

    GroundTruthChannel fixed_two_path_channel()
    {
        const arma::vec theta = {doa_to_frequency(-pi / 6.0), doa_to_frequency(pi / 3.0)};
        return GroundTruthChannel::from_polar(theta, arma::vec{0.8, 0.6}, arma::vec{-0.3 * pi, 0.2 * pi});
    }

    GroundTruthChannel single_tone_channel(double power)
    {
        return GroundTruthChannel::from_polar(arma::vec{1.0}, arma::vec{std::sqrt(power)}, arma::vec{0.5});
    }

    ArrayGeometry draw_geometry(int N, int M, Rng &rng)
    {
        if (M == N)
            return ArrayGeometry::ula(N);
        if (M < 1 || M > N)
            throw std::invalid_argument("draw_geometry: need 1 <= M <= N.");
        std::vector<int> rest(N - 1);
        std::iota(rest.begin(), rest.end(), 1);
        // partial Fisher-Yates with explicit draws so the subset does not depend on the library's shuffle
        for (int k = 0; k < M - 1; ++k)
        {
            std::uniform_int_distribution<int> pick(k, N - 2);
            std::swap(rest[k], rest[pick(rng)]);
        }
        std::vector<int> idx = {0};
        idx.insert(idx.end(), rest.begin(), rest.begin() + (M - 1));
        std::sort(idx.begin(), idx.end());
        return ArrayGeometry::sparse(idx, N);
    }

    PilotBlock draw_pilots(int T, Rng &rng)
    {
        std::uniform_real_distribution<double> phase(-pi, pi);
        PilotBlock p;
        p.x.set_size(T);
        for (int t = 0; t < T; ++t)
            p.x(t) = std::polar(1.0, phase(rng));
        return p;
    }

    std::vector<arma::uword> match_paths(const arma::vec &theta_true, const arma::vec &theta_est)
    {
        if (theta_true.n_elem != theta_est.n_elem)
            throw std::invalid_argument("match_paths: path counts differ.");
        std::vector<arma::uword> perm(theta_true.n_elem), best;
        std::iota(perm.begin(), perm.end(), arma::uword(0));
        double best_cost = std::numeric_limits<double>::infinity();
        do
        {
            double cost = 0.0;
            for (arma::uword l = 0; l < perm.size(); ++l)
                cost += std::abs(wrap_to_pi(theta_est(perm[l]) - theta_true(l)));
            if (cost < best_cost)
            {
                best_cost = cost;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return best;
    }

    Rng trial_rng(std::uint64_t master, std::uint64_t point, std::uint64_t trial)
    {
        std::seed_seq seq{std::uint32_t(master), std::uint32_t(master >> 32), std::uint32_t(point),
                          std::uint32_t(trial), std::uint32_t(trial >> 32)};
        return Rng(seq);
    }

    namespace
    {
        QuantizerSpec quantizer_for(int bits, double power)
        {
            if (bits == 0)
                return QuantizerSpec::identity();
            if (bits == 1)
                return QuantizerSpec::one_bit();
            return QuantizerSpec::uniform(bits, std::sqrt(power));
        }

        double nmse(const arma::cx_vec &est, const arma::cx_vec &truth)
        {
            return std::pow(arma::norm(est - truth), 2) / std::pow(arma::norm(truth), 2);
        }

        // Channel, pilots and observations shared by all variants of one trial
        struct TrialData
        {
            ArrayGeometry geom;
            std::vector<GroundTruthChannel> truth;
            std::vector<PilotBlock> pilots;
            std::vector<arma::cx_vec> y;
            double sigma2 = 1.0;
        };

        TrialData draw_trial(const ExperimentConfig &c, int blocks, Rng &rng)
        {
            TrialData d;
            d.sigma2 = c.power / std::pow(10.0, c.snr_db / 10.0);
            d.geom = draw_geometry(c.N, c.M, rng);
            for (int b = 0; b < blocks; ++b)
            {
                GroundTruthChannel g;
                if (c.channel_model == "fixed")
                    g = fixed_two_path_channel();
                else if (c.channel_model == "single_tone")
                    g = single_tone_channel(c.power);
                else
                {
                    g = generate_channel(c.power, c.L, rng);
                    if (b > 0) // frequencies stay, coefficients are redrawn
                        g = GroundTruthChannel::from_polar(d.truth[0].theta, g.gain, g.phase);
                }
                synthesize_channel(d.geom, g);
                d.truth.push_back(g);
            }
            for (int b = 0; b < blocks; ++b)
            {
                d.pilots.push_back(draw_pilots(c.T, rng));
                d.y.push_back(synthesize_observation(d.truth[b], d.pilots[b], d.sigma2, rng));
            }
            return d;
        }

        MetricsRecord score(const ExperimentConfig &c, const VariantSpec &v, const GroundTruthChannel &truth,
                            const ChannelEstimate &e, bool has_order)
        {
            MetricsRecord r;
            r.variant = v.label;
            r.nmse_linear = nmse(e.h_hat, truth.h);
            if (has_order)
            {
                r.L_hat = int(e.L_hat);
                r.success = r.L_hat == c.L && 10.0 * std::log10(r.nmse_linear) <= -5.0;
                if (r.L_hat == c.L)
                {
                    const auto perm = match_paths(truth.theta, e.theta_hat);
                    double st = 0.0, sg = 0.0, sp = 0.0;
                    for (arma::uword l = 0; l < perm.size(); ++l)
                    {
                        st += std::pow(wrap_to_pi(e.theta_hat(perm[l]) - truth.theta(l)), 2);
                        sg += std::pow(e.g_hat(perm[l]) - truth.gain(l), 2);
                        sp += std::pow(wrap_to_pi(e.phase_hat(perm[l]) - truth.phase(l)), 2);
                    }
                    r.mse_theta = st / double(c.L);
                    r.mse_g = sg / double(c.L);
                    r.mse_phi = sp / double(c.L);
                }
            }
            if (c.record_iterations)
            {
                // converged runs are padded with the final value
                r.nmse_iterations.assign(c.max_outer_iters, r.nmse_linear);
                for (std::size_t k = 0; k < e.history.size() && k < r.nmse_iterations.size(); ++k)
                    r.nmse_iterations[k] = nmse(e.history[k], truth.h);
            }
            return r;
        }

        ChannelEstimate run_variant(const ExperimentConfig &c, const VariantSpec &v, const TrialData &d, int b)
        {
            const int bits = v.resolved_bits(c.bit_depth);
            const QuantizerSpec spec = quantizer_for(bits, c.power);
            const EstimationSetup setup{d.geom, d.pilots[b], d.sigma2, c.power};
            EstimatorConfig ec;
            ec.max_outer_iters = c.max_outer_iters;
            ec.record_history = c.record_iterations;
            if (v.name == "LS")
                return estimate_ls(d.y[b], d.pilots[b]);
            if (v.name == "GL-VBCE" || v.name == "Seq-GL-VBCE" || bits == 0)
            {
                ec.variant = Variant::gl_vbce;
                return estimate(Observation::unquantized(d.y[b], d.sigma2), setup, ec);
            }
            if (v.name == "GL-VBCE-AQNM")
            {
                ec.variant = Variant::gl_vbce_aqnm;
                return estimate_aqnm(spec, quantize_complex(spec, d.y[b]), setup, ec);
            }
            ec.variant = Variant::gl_qvbce;
            return estimate(Observation::quantized(spec, d.y[b], d.sigma2), setup, ec);
        }

        std::vector<ChannelEstimate> run_sequential(const ExperimentConfig &c, const VariantSpec &v,
                                                    const TrialData &d)
        {
            const int bits = v.resolved_bits(c.bit_depth);
            const QuantizerSpec spec = quantizer_for(bits, c.power);
            const bool raw = v.name == "Seq-GL-VBCE" || bits == 0;
            std::vector<StreamBlock> stream;
            for (std::size_t b = 0; b < d.y.size(); ++b)
                stream.push_back({raw ? Observation::unquantized(d.y[b], d.sigma2)
                                      : Observation::quantized(spec, d.y[b], d.sigma2),
                                  d.pilots[b]});
            EstimatorConfig ec;
            ec.variant = raw ? Variant::gl_vbce : Variant::gl_qvbce;
            ec.max_outer_iters = c.max_outer_iters;
            ec.record_history = c.record_iterations;
            return estimate_sequential(stream, d.geom, d.sigma2, c.power, c.lambda, ec);
        }

        std::string opt(const std::optional<double> &v)
        {
            return v ? fmt::format("{}", *v) : std::string();
        }

        // Runs body(task) for every task and rethrows the first failure
        template <typename F>
        void for_each_task(std::size_t n, Exec exec, F body)
        {
            std::exception_ptr failure;
            if (exec == Exec::parallel)
            {
#pragma omp parallel for schedule(dynamic, 1)
                for (std::size_t k = 0; k < n; ++k)
                {
                    try
                    {
                        body(k);
                    }
                    catch (...)
                    {
#pragma omp critical(glqvbce_task_failure)
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            }
            else
            {
                for (std::size_t k = 0; k < n; ++k)
                    body(k);
            }
            if (failure)
                std::rethrow_exception(failure);
        }
    }

    std::vector<MetricsRecord> run_trial(const ExperimentConfig &config, std::size_t point, int trial)
    {
        const bool by_block = config.sweep_name == "pilot_index";
        const ExperimentConfig c = by_block ? config : apply_sweep_value(config, config.sweep_values.at(point));
        std::vector<int> report; // 0-based block indices that produce records
        int blocks = 1;
        if (by_block)
        {
            for (double v : config.sweep_values)
                report.push_back(int(v) - 1);
            blocks = *std::max_element(report.begin(), report.end()) + 1;
        }
        else
            report = {0};

        Rng rng = trial_rng(c.seed, by_block ? 0 : point, std::uint64_t(trial));
        const TrialData d = draw_trial(c, blocks, rng);

        // block t of a sequential stream only depends on blocks 1..t, so one pass serves every index
        std::vector<std::vector<ChannelEstimate>> streams(c.variants.size());
        for (std::size_t vi = 0; vi < c.variants.size(); ++vi)
            if (const VariantSpec v = parse_variant(c.variants[vi]); v.sequential())
                streams[vi] = run_sequential(c, v, d);

        std::vector<MetricsRecord> out;
        for (std::size_t k = 0; k < report.size(); ++k)
        {
            const int b = report[k];
            const double value = by_block ? config.sweep_values[k] : config.sweep_values[point];
            for (std::size_t vi = 0; vi < c.variants.size(); ++vi)
            {
                const VariantSpec v = parse_variant(c.variants[vi]);
                if (v.is_crb())
                    continue;
                const ChannelEstimate e = v.sequential() ? streams[vi][b] : run_variant(c, v, d, b);
                MetricsRecord r = score(c, v, d.truth[b], e, v.name != "LS");
                r.sweep_value = value;
                r.trial = trial;
                out.push_back(std::move(r));
            }
        }
        return out;
    }

    std::vector<MetricsRecord> run_experiment(const ExperimentConfig &config, Exec exec)
    {
        config.validate();
        const std::size_t points = config.sweep_name == "pilot_index" ? 1 : config.sweep_values.size();
        const std::size_t trials = std::size_t(config.trials);
        std::vector<std::vector<MetricsRecord>> slots(points * trials);
        for_each_task(slots.size(), exec, [&](std::size_t k)
                      { slots[k] = run_trial(config, k / trials, int(k % trials)); });

        std::vector<MetricsRecord> out;
        if (config.sweep_name == "pilot_index")
        {
            // regroup so records are ordered by sweep value first
            for (std::size_t v = 0; v < config.sweep_values.size(); ++v)
                for (const auto &slot : slots)
                    for (const auto &r : slot)
                        if (r.sweep_value == config.sweep_values[v])
                            out.push_back(r);
        }
        else
            for (auto &slot : slots)
                for (auto &r : slot)
                    out.push_back(std::move(r));
        return out;
    }

    std::vector<SummaryRow> summarize(const ExperimentConfig &config, const std::vector<MetricsRecord> &records)
    {
        std::vector<SummaryRow> rows;
        for (double value : config.sweep_values)
            for (const auto &token : config.variants)
            {
                if (parse_variant(token).is_crb())
                    continue;
                SummaryRow s;
                s.variant = token;
                s.sweep_value = value;
                double sum = 0.0, st = 0.0, sg = 0.0, sp = 0.0;
                int ok = 0;
                std::vector<double> it;
                for (const auto &r : records)
                {
                    if (r.variant != token || r.sweep_value != value)
                        continue;
                    ++s.trials;
                    sum += r.nmse_linear;
                    if (it.size() < r.nmse_iterations.size())
                        it.resize(r.nmse_iterations.size(), 0.0);
                    for (std::size_t k = 0; k < r.nmse_iterations.size(); ++k)
                        it[k] += r.nmse_iterations[k];
                    if (r.success && r.mse_theta)
                    {
                        ++ok;
                        st += *r.mse_theta;
                        sg += *r.mse_g;
                        sp += *r.mse_phi;
                    }
                }
                if (s.trials == 0)
                    continue;
                s.nmse_db = 10.0 * std::log10(sum / s.trials);
                s.success_rate = double(ok) / s.trials;
                if (ok > 0)
                {
                    s.mse_theta = st / ok;
                    s.mse_g = sg / ok;
                    s.mse_phi = sp / ok;
                }
                for (double x : it)
                    s.nmse_iterations_db.push_back(10.0 * std::log10(x / s.trials));
                rows.push_back(std::move(s));
            }
        return rows;
    }

    std::string records_csv(const ExperimentConfig &config, const std::vector<MetricsRecord> &records)
    {
        std::string out = "scenario,variant,sweep_name,sweep_value,trial,nmse_linear,L_hat,success,mse_theta,mse_g,mse_phi";
        if (config.record_iterations)
            for (int k = 1; k <= config.max_outer_iters; ++k)
                out += fmt::format(",nmse_it{}", k);
        out += "\n";
        for (const auto &r : records)
        {
            out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}", config.scenario, r.variant, config.sweep_name,
                               r.sweep_value, r.trial, r.nmse_linear, r.L_hat < 0 ? std::string() : fmt::format("{}", r.L_hat),
                               int(r.success), opt(r.mse_theta), opt(r.mse_g), opt(r.mse_phi));
            for (double x : r.nmse_iterations)
                out += fmt::format(",{}", x);
            out += "\n";
        }
        return out;
    }

    std::string summary_csv(const ExperimentConfig &config, const std::vector<SummaryRow> &rows)
    {
        std::string out = "scenario,variant,sweep_name,sweep_value,trials,nmse_db,success_rate,mse_theta,mse_g,mse_phi";
        if (config.record_iterations)
            for (int k = 1; k <= config.max_outer_iters; ++k)
                out += fmt::format(",nmse_db_it{}", k);
        out += "\n";
        for (const auto &s : rows)
        {
            out += fmt::format("{},{},{},{},{},{},{},{},{},{}", config.scenario, s.variant, config.sweep_name,
                               s.sweep_value, s.trials, s.nmse_db, s.success_rate, opt(s.mse_theta), opt(s.mse_g),
                               opt(s.mse_phi));
            for (double x : s.nmse_iterations_db)
                out += fmt::format(",{}", x);
            out += "\n";
        }
        return out;
    }

    std::vector<CrbRow> run_crb_curves(const ExperimentConfig &config, Exec exec)
    {
        config.validate();
        if (config.sweep_name == "pilot_index")
            throw std::invalid_argument("run_crb_curves: a pilot_index sweep has no CRB.");
        std::vector<VariantSpec> variants;
        for (const auto &token : config.variants)
            if (parse_variant(token).is_crb())
                variants.push_back(parse_variant(token));
        if (variants.empty())
            for (const char *t : {"CRB:1", "CRB:2", "CRB:0"})
                variants.push_back(parse_variant(t));

        const std::size_t points = config.sweep_values.size(), trials = std::size_t(config.trials);
        // per (point, trial): per variant [theta, g, phi] path means, NaN when singular
        std::vector<std::vector<arma::vec3>> slots(points * trials);
        for_each_task(slots.size(), exec, [&](std::size_t k)
                      {
                          const std::size_t p = k / trials;
                          const ExperimentConfig c = apply_sweep_value(config, config.sweep_values[p]);
                          Rng rng = trial_rng(c.seed, p, k % trials);
                          const TrialData d = draw_trial(c, 1, rng);
                          for (const auto &v : variants)
                          {
                              const FimResult f = fim(d.geom, d.truth[0], d.pilots[0], d.sigma2,
                                                      quantizer_for(v.resolved_bits(c.bit_depth), c.power));
                              arma::vec3 m;
                              m.fill(arma::datum::nan);
                              if (f.crb_available)
                                  m = {arma::mean(f.crb_theta()), arma::mean(f.crb_gain()), arma::mean(f.crb_phase())};
                              slots[k].push_back(m);
                          } });

        std::vector<CrbRow> rows;
        for (std::size_t p = 0; p < points; ++p)
            for (std::size_t vi = 0; vi < variants.size(); ++vi)
            {
                CrbRow r;
                r.variant = variants[vi].label;
                r.sweep_value = config.sweep_values[p];
                arma::vec3 sum(arma::fill::zeros);
                int n = 0;
                for (std::size_t t = 0; t < trials; ++t)
                {
                    const arma::vec3 &m = slots[p * trials + t][vi];
                    if (m.has_nan())
                        ++r.singular;
                    else
                    {
                        sum += m;
                        ++n;
                    }
                }
                const double nan = std::numeric_limits<double>::quiet_NaN();
                r.crb_theta_db = n ? to_db(sum(0) / n) : nan;
                r.crb_g_db = n ? to_db(sum(1) / n) : nan;
                r.crb_phi_db = n ? to_db(sum(2) / n) : nan;
                rows.push_back(r);
            }
        return rows;
    }

    std::string crb_csv(const ExperimentConfig &config, const std::vector<CrbRow> &rows)
    {
        std::string out = "scenario,variant,sweep_name,sweep_value,crb_theta_db,crb_g_db,crb_phi_db,singular\n";
        for (const auto &r : rows)
        {
            auto cell = [](double x) { return std::isnan(x) ? std::string() : fmt::format("{}", x); };
            out += fmt::format("{},{},{},{},{},{},{},{}\n", config.scenario, r.variant, config.sweep_name,
                               r.sweep_value, cell(r.crb_theta_db), cell(r.crb_g_db), cell(r.crb_phi_db), r.singular);
        }
        return out;
    }
}
