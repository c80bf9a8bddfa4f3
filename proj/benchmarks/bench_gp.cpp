// Copyright 2026 The beacon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "beacon/gp.hpp"
#include "beacon/random.hpp"
#include "beacon/sampling.hpp"

namespace {

using namespace beacon;

Dataset make_data(int N, int d, int n, std::uint64_t seed) {
    Rng rng(seed);
    Dataset data;
    for (int i = 0; i < N; ++i) data.add(rng.normal_vector(d), rng.normal_vector(n));
    return data;
}

KernelSpec make_spec(int d, int n) {
    KernelSpec spec;
    spec.family = KernelFamily::Matern52Ard;
    spec.lengthscales = Eigen::VectorXd::Constant(d, 1.2);
    spec.signal_variance = 1.0;
    spec.noise_variance = 0.05;
    spec.task_coupling = Eigen::MatrixXd::Identity(n, n);
    return spec;
}

void BM_FitPosterior(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const int n = static_cast<int>(state.range(1));
    const Dataset data = make_data(N, 6, n, 1);
    const KernelSpec spec = make_spec(6, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_posterior(data, spec));
    }
}
BENCHMARK(BM_FitPosterior)->Args({50, 1})->Args({200, 1})->Args({150, 2})->Args({300, 2});

void BM_PosteriorMean(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const Dataset data = make_data(N, 6, 1, 2);
    const FittedGP gp = fit_posterior(data, make_spec(6, 1));
    Rng rng(3);
    const Eigen::VectorXd x = rng.normal_vector(6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(posterior_mean(gp, x));
    }
}
BENCHMARK(BM_PosteriorMean)->Arg(50)->Arg(200)->Arg(400);

void BM_LogMarginalGradient(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    const Dataset data = make_data(N, 6, 1, 4);
    PackedKernel packed = PackedKernel::from_spec(make_spec(6, 1), false);
    packed.input_dim = 6;
    packed.outcome_dim = 1;
    Eigen::VectorXd grad;
    for (auto _ : state) {
        benchmark::DoNotOptimize(packed_log_marginal_likelihood(data, packed, &grad));
    }
}
BENCHMARK(BM_LogMarginalGradient)->Arg(50)->Arg(100)->Arg(200);

void BM_DrawPath(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Dataset data = make_data(60, 6, 1, 5);
    auto gp = std::make_shared<const FittedGP>(fit_posterior(data, make_spec(6, 1)));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(draw_path(gp, m, ++seed));
    }
}
BENCHMARK(BM_DrawPath)->Arg(256)->Arg(1024)->Arg(4096);

}  // namespace
