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

// Serial reference paths against their OpenMP counterparts. Arg 0 = serial, 1 = parallel.

#include "glqvbce/crb.hpp"
#include "glqvbce/experiments.hpp"
#include "glqvbce/mmse_module.hpp"

#include <benchmark/benchmark.h>

using namespace glqvbce;

namespace
{
    Exec exec_of(const benchmark::State &state) { return state.range(0) ? Exec::parallel : Exec::serial; }

    void bm_quantized_moments(benchmark::State &state)
    {
        const arma::uword n = 8192;
        Rng rng(7);
        const double sigma2 = 0.1;
        const arma::cx_vec z = complex_normal(n, 1.0, rng);
        const Observation obs = Observation::quantized(QuantizerSpec::uniform(2, std::sqrt(1.0 + sigma2)),
                                                       z + complex_normal(n, sigma2, rng), sigma2);
        GaussianMessage cavity{0.9 * z, arma::vec(n, arma::fill::value(0.2))};
        for (auto _ : state)
            benchmark::DoNotOptimize(quantized_posterior_moments(cavity, obs, exec_of(state)));
        state.SetItemsProcessed(state.iterations() * std::int64_t(n));
    }

    void bm_fim(benchmark::State &state)
    {
        Rng rng(11);
        const ArrayGeometry geom = ArrayGeometry::ula(96);
        GroundTruthChannel truth = generate_channel(1.0, 3, rng);
        synthesize_channel(geom, truth);
        const PilotBlock pilot = draw_pilots(8, rng);
        const QuantizerSpec spec = QuantizerSpec::uniform(2, std::sqrt(1.1));
        for (auto _ : state)
            benchmark::DoNotOptimize(fim(geom, truth, pilot, 0.1, spec, exec_of(state)));
    }

    void bm_trials(benchmark::State &state)
    {
        ExperimentConfig config;
        config.N = config.M = 32;
        config.T = 2;
        config.trials = 8;
        config.snr_db = 10.0;
        config.sweep_values = {10.0};
        config.variants = {"GL-QVBCE"};
        for (auto _ : state)
            benchmark::DoNotOptimize(run_experiment(config, exec_of(state)));
        state.SetItemsProcessed(state.iterations() * config.trials);
    }
}

BENCHMARK(bm_quantized_moments)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(bm_fim)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond)->UseRealTime();
BENCHMARK(bm_trials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
