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
#include "glqvbce/data_file.hpp"
#include "glqvbce/experiments.hpp"
#include "glqvbce/presets.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace glqvbce;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace
{
    fs::path temp_path(const std::string &name)
    {
        return fs::temp_directory_path() / ("glqvbce_test_" + std::to_string(::getpid()) + "_" + name);
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    int run(const std::string &args)
    {
        const std::string cmd = std::string(GLQVBCE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
        const int rc = std::system(cmd.c_str());
        return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    }

    ExperimentConfig small_config()
    {
        ExperimentConfig c;
        c.scenario = "unit";
        c.N = c.M = 16;
        c.L = 2;
        c.T = 2;
        c.trials = 6;
        c.sweep_values = {0.0, 10.0};
        c.variants = {"LS", "GL-VBCE", "GL-QVBCE:1", "GL-VBCE-AQNM:2"};
        c.record_iterations = true;
        c.max_outer_iters = 5;
        return c;
    }
}

TEST_CASE("config parsing and validation")
{
    const ExperimentConfig d;
    CHECK(parse_config("{}") == d);
    CHECK(parse_config(serialize_config(small_config())) == small_config());
    CHECK_THROWS_AS(parse_config("{\"bogus\": 1}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("{\"sweep_values\": []}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("{\"trials\": 0}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("{\"variants\": [\"GL-FOO\"]}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("{\"variants\": [\"GL-QVBCE:x\"]}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("{\"M\": 80, \"N\": 64}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("{\"sweep_name\": \"L\", \"sweep_values\": [2.5]}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("{\"N\": \"many\"}"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("{\"channel_model\": \"fixed\", \"L\": 3}"), std::invalid_argument);

    const VariantSpec v = parse_variant("GL-QVBCE:3");
    CHECK(v.name == "GL-QVBCE");
    CHECK(v.bits == 3);
    CHECK(v.resolved_bits(1) == 3);
    CHECK(parse_variant("Seq-GL-VBCE").sequential());
    CHECK(parse_variant("CRB").is_crb());

    const ExperimentConfig s = apply_sweep_value(small_config(), 7.0);
    CHECK(s.snr_db == 7.0);
}

TEST_CASE("presets round-trip and carry their sweep parameters")
{
    const std::string dir = GLQVBCE_TEST_PRESET_DIR;
    const auto names = list_presets(dir);
    for (const char *n : {"nmse_vs_iteration", "nmse_vs_snr", "crb_fixed_two_path", "nmse_vs_bit_depth", "nmse_vs_antennas", "nmse_vs_paths", "nmse_vs_pilot_length", "sequential_tracking"})
        CHECK(std::find(names.begin(), names.end(), n) != names.end());
    for (const auto &n : names)
    {
        INFO(n);
        const ExperimentConfig c = load_preset(n, dir);
        CHECK(c.scenario == n);
        CHECK(parse_config(serialize_config(c)) == c);
        CHECK(serialize_config(c) == slurp(fs::path(dir) / (n + ".json")));
    }
    const ExperimentConfig bits = load_preset("nmse_vs_bit_depth", dir);
    CHECK(bits.snr_db == 5.0);
    CHECK(bits.T == 2);
    CHECK(bits.N == 64);
    CHECK(bits.M == 64);
    const ExperimentConfig ant = load_preset("nmse_vs_antennas", dir);
    CHECK(ant.N == 200);
    CHECK(ant.T == 1);
    CHECK(ant.snr_db == 0.0);
    const ExperimentConfig seq = load_preset("sequential_tracking", dir);
    CHECK(seq.lambda == 0.1);
    CHECK(seq.N == 96);
    CHECK(seq.M == 96);
    CHECK(seq.L == 2);
    const ExperimentConfig iters = load_preset("nmse_vs_iteration", dir);
    CHECK(iters.N == 48);
    CHECK(iters.record_iterations);
    CHECK(load_preset("nmse_vs_snr", dir).L == 2);
    CHECK_THROWS(load_preset("nope", dir));
}

TEST_CASE("channel generation")
{
    Rng rng(1);
    const int n = 100000;
    double total = 0.0, los = 0.0;
    for (int k = 0; k < n; ++k)
    {
        const GroundTruthChannel t = generate_channel(2.0, 3, rng);
        REQUIRE(arma::all(t.gain > 0.0));
        REQUIRE(arma::all(arma::abs(t.theta) <= pi));
        total += arma::accu(arma::square(t.gain));
        los += t.gain(0) * t.gain(0);
    }
    CHECK(total / n == Catch::Approx(2.0).epsilon(0.02));
    CHECK(los / n == Catch::Approx(1.0).epsilon(0.02));

    double single = 0.0;
    for (int k = 0; k < n; ++k)
        single += std::pow(generate_channel(1.0, 1, rng).gain(0), 2);
    CHECK(single / n == Catch::Approx(0.5).epsilon(0.02));

    const GroundTruthChannel f = fixed_two_path_channel();
    CHECK(f.theta(0) == Catch::Approx(pi * std::sin(-pi / 6.0)));
    CHECK(f.theta(1) == Catch::Approx(pi * std::sin(pi / 3.0)));
    CHECK(std::abs(f.beta(0) - std::polar(0.8, -0.3 * pi)) < 1e-15);
    CHECK(std::abs(f.beta(1) - std::polar(0.6, 0.2 * pi)) < 1e-15);

    const ArrayGeometry g = draw_geometry(200, 40, rng);
    CHECK(g.size() == 40);
    CHECK(g.indices.front() == 0);
    CHECK(g.aperture == 200);
    CHECK(std::adjacent_find(g.indices.begin(), g.indices.end(), std::greater_equal<int>()) == g.indices.end());
    CHECK(draw_geometry(16, 16, rng).indices == ArrayGeometry::ula(16).indices);

    const PilotBlock p = draw_pilots(5, rng);
    CHECK(arma::approx_equal(arma::abs(p.x), arma::vec(5, arma::fill::ones), "absdiff", 1e-15));
}

TEST_CASE("path matching")
{
    CHECK(match_paths({0.1, 1.0, -2.0}, {-2.0, 0.1, 1.0}) == std::vector<arma::uword>{1, 2, 0});
    CHECK(match_paths({0.5, 0.6}, {0.61, 0.49}) == std::vector<arma::uword>{1, 0});
    // across the wrap point
    CHECK(match_paths({3.1, 0.0}, {0.01, -3.1}) == std::vector<arma::uword>{1, 0});
    // exact tie: the lexicographically first permutation wins
    CHECK(match_paths({0.0, 1.0}, {0.5, 0.5}) == std::vector<arma::uword>{0, 1});
    CHECK_THROWS(match_paths({0.0}, {0.0, 1.0}));

    // brute-force check on random near-ties
    Rng rng(4);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int rep = 0; rep < 50; ++rep)
    {
        arma::vec a(4), b(4);
        for (int l = 0; l < 4; ++l)
        {
            a(l) = u(rng);
            b(l) = u(rng);
        }
        const auto perm = match_paths(a, b);
        double best = 1e300, got = 0.0;
        std::vector<arma::uword> q = {0, 1, 2, 3};
        do
        {
            double c = 0.0;
            for (int l = 0; l < 4; ++l)
                c += std::abs(wrap_to_pi(b(q[l]) - a(l)));
            best = std::min(best, c);
        } while (std::next_permutation(q.begin(), q.end()));
        for (int l = 0; l < 4; ++l)
            got += std::abs(wrap_to_pi(b(perm[l]) - a(l)));
        CHECK(got == Catch::Approx(best).margin(1e-15));
    }
}

TEST_CASE("experiment output is deterministic")
{
    const ExperimentConfig c = small_config();
    const auto serial = run_experiment(c, Exec::serial);
    const auto parallel = run_experiment(c, Exec::parallel);
    CHECK(records_csv(c, serial) == records_csv(c, parallel));
    CHECK(records_csv(c, serial) == records_csv(c, run_experiment(c, Exec::serial)));
    ExperimentConfig other = c;
    other.seed = 99;
    CHECK(records_csv(c, serial) != records_csv(other, run_experiment(other, Exec::serial)));

    CHECK(serial.size() == 2 * 6 * 4);
    for (const auto &r : serial)
    {
        CHECK(r.nmse_linear >= 0.0);
        CHECK(r.nmse_iterations.size() == 5);
        if (r.success)
        {
            CHECK(r.L_hat == 2);
            CHECK(10.0 * std::log10(r.nmse_linear) <= -5.0);
        }
        if (r.variant == "LS")
            CHECK(r.L_hat == -1);
    }
    const std::string csv = records_csv(c, serial);
    CHECK(csv.rfind("scenario,variant,sweep_name,sweep_value,trial,nmse_linear,L_hat,success,mse_theta,mse_g,mse_phi,nmse_it1", 0) == 0);

    // success-conditioned columns are empty exactly when nothing succeeded
    for (const SummaryRow &s : summarize(c, serial))
    {
        CHECK(s.trials == 6);
        CHECK(s.mse_theta.has_value() == (s.success_rate > 0.0));
        CHECK(s.nmse_iterations_db.size() == 5);
    }
}

TEST_CASE("sequential sweep emits one record per block")
{
    ExperimentConfig c;
    c.N = c.M = 24;
    c.L = 2;
    c.T = 1;
    c.trials = 2;
    c.sweep_name = "pilot_index";
    c.sweep_values = {1.0, 3.0};
    c.variants = {"GL-QVBCE:1", "Seq-GL-QVBCE:1"};
    c.max_outer_iters = 4;
    const auto rec = run_experiment(c, Exec::serial);
    CHECK(rec.size() == 2 * 2 * 2);
    CHECK(rec.front().sweep_value == 1.0);
    CHECK(rec.back().sweep_value == 3.0);
    // the first block has no prior, so both variants agree there
    CHECK(rec[0].nmse_linear == rec[1].nmse_linear);
    CHECK(records_csv(c, rec) == records_csv(c, run_experiment(c, Exec::parallel)));
}

TEST_CASE("CRB curves")
{
    ExperimentConfig c;
    c.N = c.M = 32;
    c.channel_model = "fixed";
    c.trials = 2;
    c.sweep_values = {0.0, 10.0};
    c.variants = {"GL-VBCE"};
    const auto rows = run_crb_curves(c, Exec::serial);
    REQUIRE(rows.size() == 6);
    CHECK(crb_csv(c, rows) == crb_csv(c, run_crb_curves(c, Exec::parallel)));
    for (const auto &r : rows)
        CHECK(r.singular == 0);
    // unquantized bounds drop by 10 dB per 10 dB of SNR
    CHECK(rows[5].crb_theta_db - rows[2].crb_theta_db == Catch::Approx(-10.0).margin(1e-9));
    CHECK(rows[0].crb_theta_db > rows[2].crb_theta_db);
}

TEST_CASE("matrix files")
{
    const fs::path p = temp_path("m.bin");
    Rng rng(2);
    const arma::cx_mat X = arma::reshape(complex_normal(12, 1.0, rng), 4, 3);
    write_matrix(p.string(), X);
    CHECK(fs::file_size(p) == 8 + 16 + 12 * 16);
    const arma::cx_mat Y = read_matrix(p.string());
    CHECK(arma::approx_equal(X, Y, "absdiff", 0.0));

    const std::string bytes = slurp(p);
    CHECK(bytes.substr(0, 8) == "GLQVMAT1");
    std::ofstream(p, std::ios::binary) << "BADMAGIC" << bytes.substr(8);
    CHECK_THROWS(read_matrix(p.string()));
    std::ofstream(p, std::ios::binary) << bytes.substr(0, bytes.size() - 3);
    CHECK_THROWS(read_matrix(p.string()));
    CHECK_THROWS(read_matrix((p.string() + ".missing")));
    fs::remove(p);
}

TEST_CASE("command line verbs")
{
    const fs::path y = temp_path("y.bin"), x = temp_path("x.bin"), truth = temp_path("t.json"), out = temp_path("e.json");
    REQUIRE(run("synthesize --M 24 --L 2 --T 2 --snr 15 --seed 3 --out " + y.string() + " --pilot-out " + x.string() +
                " --truth-out " + truth.string()) == 0);
    const double s2 = nlohmann::json::parse(slurp(truth))["sigma2"].get<double>();
    for (const char *v : {"GL-QVBCE", "GL-VBCE", "GL-VBCE-AQNM", "LS"})
    {
        INFO(v);
        CHECK(run("estimate " + y.string() + " --pilot " + x.string() + " --sigma2 " + std::to_string(s2) +
                  " --bits 2 --variant " + v + " --out " + out.string()) == 0);
        const auto j = nlohmann::json::parse(slurp(out));
        CHECK(j["h_re"].size() == 24);
    }
    CHECK(run("estimate " + y.string() + " --sigma2 0.1 --variant NOPE") != 0);
    CHECK(run("estimate " + y.string() + " --sigma2 -1") != 0);
    CHECK(run("estimate /nonexistent.bin --sigma2 0.1") != 0);
    CHECK(run("simulate /nonexistent.json") != 0);
    CHECK(run("presets") == 0);

    const fs::path cfg = temp_path("c.json"), csv = temp_path("r.csv");
    ExperimentConfig c = small_config();
    c.trials = 2;
    std::ofstream(cfg) << serialize_config(c);
    CHECK(run("simulate " + cfg.string() + " --seed 5 --trials 3 --out " + csv.string()) == 0);
    const std::string body = slurp(csv);
    CHECK(std::count(body.begin(), body.end(), '\n') == 1 + 2 * 3 * 4);
    CHECK(fs::exists(csv.string() + ".summary.csv"));
    CHECK(run("crb " + cfg.string() + " --out " + csv.string()) == 0);
    std::ofstream(cfg) << "{\"trials\": -3}";
    CHECK(run("simulate " + cfg.string()) != 0);
    for (const auto &p : {y, x, truth, out, cfg, csv})
        fs::remove(p);
    fs::remove(csv.string() + ".summary.csv");
}
