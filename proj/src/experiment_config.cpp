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

#include "glqvbce/experiment_config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace glqvbce
{
    namespace
    {
        const std::set<std::string> sweep_names = {"snr_db", "bit_depth", "M", "L", "T", "pilot_index"};
        const std::set<std::string> variant_names = {"LS", "GL-VBCE", "GL-QVBCE", "GL-VBCE-AQNM",
                                                     "Seq-GL-QVBCE", "Seq-GL-VBCE", "CRB"};
        const std::set<std::string> channel_models = {"random", "fixed", "single_tone"};

        void require(bool ok, const std::string &msg)
        {
            if (!ok)
                throw std::invalid_argument("config: " + msg);
        }

        int as_int(double v, const std::string &what)
        {
            require(std::isfinite(v) && v == std::round(v), what + " must be an integer.");
            return int(v);
        }

        template <typename T>
        void read(const nlohmann::json &j, const char *key, T &dst)
        {
            auto it = j.find(key);
            if (it == j.end())
                return;
            try
            {
                dst = it->get<T>();
            }
            catch (const nlohmann::json::exception &)
            {
                throw std::invalid_argument(std::string("config: wrong type for '") + key + "'.");
            }
        }
    }

    namespace
    {
        void check_point(const ExperimentConfig &c)
        {
            const int N = c.N, M = c.M, L = c.L, T = c.T, bit_depth = c.bit_depth;
            const double lambda = c.lambda, snr_db = c.snr_db, power = c.power;
            const std::string &channel_model = c.channel_model;
            require(N >= 1 && M >= 1 && M <= N, "need 1 <= M <= N.");
            require(L >= 1 && L < N, "need 1 <= L < N.");
            require(T >= 1, "T must be >= 1.");
            require(bit_depth >= 0 && bit_depth <= 16, "bit_depth must be in [0, 16].");
            require(lambda > 0.0 && lambda <= 1.0, "lambda must be in (0, 1].");
            require(std::isfinite(snr_db), "snr_db must be finite.");
            require(power > 0.0 && std::isfinite(power), "power must be positive.");
            require(channel_models.count(channel_model) == 1, "unknown channel_model '" + channel_model + "'.");
            require(channel_model != "fixed" || L == 2, "the fixed scenario has L = 2.");
            require(channel_model != "single_tone" || L == 1, "the single_tone scenario has L = 1.");
        }
    }

    void ExperimentConfig::validate() const
    {
        require(sweep_names.count(sweep_name) == 1, "unknown sweep_name '" + sweep_name + "'.");
        require(!sweep_values.empty(), "sweep_values must not be empty.");
        require(trials >= 1, "trials must be >= 1.");
        require(max_outer_iters >= 1, "max_outer_iters must be >= 1.");
        require(!variants.empty(), "variants must not be empty.");
        for (const auto &v : variants)
            parse_variant(v);
        check_point(*this);
        for (double v : sweep_values)
        {
            if (sweep_name == "pilot_index")
                require(as_int(v, "pilot_index") >= 1, "pilot_index values must be >= 1.");
            else
                check_point(apply_sweep_value(*this, v));
        }
    }

    VariantSpec parse_variant(const std::string &token)
    {
        VariantSpec v;
        v.label = token;
        const auto colon = token.find(':');
        v.name = token.substr(0, colon);
        require(variant_names.count(v.name) == 1, "unknown variant '" + token + "'.");
        if (colon != std::string::npos)
        {
            const std::string b = token.substr(colon + 1);
            require(!b.empty() && b.find_first_not_of("0123456789") == std::string::npos,
                    "bad bit depth in variant '" + token + "'.");
            v.bits = std::stoi(b);
            require(v.bits <= 16, "bit depth too large in variant '" + token + "'.");
        }
        return v;
    }

    ExperimentConfig parse_config(const std::string &json_text)
    {
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(json_text);
        }
        catch (const nlohmann::json::parse_error &e)
        {
            throw std::invalid_argument(std::string("config: ") + e.what());
        }
        require(j.is_object(), "top level must be an object.");
        static const std::set<std::string> keys = {
            "scenario", "note", "sweep_name", "sweep_values", "N", "M", "L", "T", "snr_db", "bit_depth", "lambda",
            "trials", "seed", "channel_model", "variants", "max_outer_iters", "record_iterations", "power"};
        for (const auto &item : j.items())
            require(keys.count(item.key()) == 1, "unknown key '" + item.key() + "'.");

        ExperimentConfig c;
        read(j, "scenario", c.scenario);
        read(j, "note", c.note);
        read(j, "sweep_name", c.sweep_name);
        read(j, "sweep_values", c.sweep_values);
        read(j, "N", c.N);
        read(j, "M", c.M);
        read(j, "L", c.L);
        read(j, "T", c.T);
        read(j, "snr_db", c.snr_db);
        read(j, "bit_depth", c.bit_depth);
        read(j, "lambda", c.lambda);
        read(j, "trials", c.trials);
        read(j, "seed", c.seed);
        read(j, "channel_model", c.channel_model);
        read(j, "variants", c.variants);
        read(j, "max_outer_iters", c.max_outer_iters);
        read(j, "record_iterations", c.record_iterations);
        read(j, "power", c.power);
        c.validate();
        return c;
    }

    std::string serialize_config(const ExperimentConfig &c)
    {
        nlohmann::ordered_json j;
        j["scenario"] = c.scenario;
        j["note"] = c.note;
        j["sweep_name"] = c.sweep_name;
        j["sweep_values"] = c.sweep_values;
        j["N"] = c.N;
        j["M"] = c.M;
        j["L"] = c.L;
        j["T"] = c.T;
        j["snr_db"] = c.snr_db;
        j["bit_depth"] = c.bit_depth;
        j["lambda"] = c.lambda;
        j["trials"] = c.trials;
        j["seed"] = c.seed;
        j["channel_model"] = c.channel_model;
        j["variants"] = c.variants;
        j["max_outer_iters"] = c.max_outer_iters;
        j["record_iterations"] = c.record_iterations;
        j["power"] = c.power;
        return j.dump(2) + "\n";
    }

    ExperimentConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("config: cannot open '" + path + "'.");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse_config(ss.str());
    }

    ExperimentConfig apply_sweep_value(const ExperimentConfig &config, double value)
    {
        ExperimentConfig c = config;
        const std::string &s = config.sweep_name;
        if (s == "snr_db")
            c.snr_db = value;
        else if (s == "bit_depth")
            c.bit_depth = as_int(value, "bit_depth");
        else if (s == "M")
            c.M = as_int(value, "M");
        else if (s == "L")
            c.L = as_int(value, "L");
        else if (s == "T")
            c.T = as_int(value, "T");
        return c;
    }
}
