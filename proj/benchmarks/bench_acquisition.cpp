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

#include "beacon/acquisition.hpp"
#include "beacon/random.hpp"

namespace {

using namespace beacon;

ReferenceSet make_refs(int count, int n, std::uint64_t seed) {
    Rng rng(seed);
    ReferenceSet refs;
    for (int i = 0; i < count; ++i) {
        refs.points.push_back(rng.normal_vector(n));
        refs.bins.push_back(BinId{i});
    }
    return refs;
}

void BM_NoveltySorted(benchmark::State& state) {
    const int count = static_cast<int>(state.range(0));
    const ReferenceSet refs = make_refs(count, 2, 1);
    NoveltyConfig config;
    config.k = 10;
    Rng rng(2);
    const Eigen::VectorXd y = rng.normal_vector(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(novelty_sorted(y, refs, config));
    }
}
BENCHMARK(BM_NoveltySorted)->Arg(25)->Arg(100)->Arg(1000);

void BM_NoveltyNaive(benchmark::State& state) {
    const int count = static_cast<int>(state.range(0));
    const ReferenceSet refs = make_refs(count, 2, 1);
    NoveltyConfig config;
    config.k = 10;
    Rng rng(2);
    const Eigen::VectorXd y = rng.normal_vector(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(novelty_naive(y, refs, config));
    }
}
BENCHMARK(BM_NoveltyNaive)->Arg(25)->Arg(100)->Arg(1000);

void BM_DiscreteArgmax(benchmark::State& state) {
    const int pool_size = static_cast<int>(state.range(0));
    const ReferenceSet refs = make_refs(25, 1, 3);
    NoveltyConfig config;
    config.k = 10;
    Rng rng(4);
    Eigen::MatrixXd sampled(pool_size, 1);
    for (int i = 0; i < pool_size; ++i) sampled(i, 0) = rng.normal();
    std::vector<char> evaluated(pool_size, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(maximize_discrete(sampled, refs, config, evaluated, nullptr));
    }
}
BENCHMARK(BM_DiscreteArgmax)->Arg(2000)->Arg(20000);

}  // namespace
