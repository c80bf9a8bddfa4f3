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

#ifndef BEACON_CONFIG_HPP
#define BEACON_CONFIG_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "beacon/algorithms.hpp"
#include "beacon/problems.hpp"

namespace beacon {

// Raised for malformed experiment configs; the message names the offending key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProblemSpec {
    std::string name;        // ackley | rosenbrock | styblinski-tang | multi-output-plus | pool
    int dimension = 0;       // synthetic families
    double noise_std = -1.0; // -1 means auto: 1% of empirical outcome std
    std::string pool_path;
    int pool_input_dim = 0;
    int pool_outcome_dim = 0;
};

struct SpaceSpec {
    std::vector<int> bins_per_dim;
    // Explicit per-output (lo, hi); absent means the recorded-seed empirical
    // estimate.
    std::optional<std::vector<std::pair<double, double>>> range;
};

struct AlgorithmEntry {
    std::string name;   // beacon | ug-beacon | rs | sobol | maxvar | ns-ea
    std::string label;  // series label, unique across entries (defaults to name)
    BeaconConfig beacon;
    GpConfig maxvar_gp;
    int maxvar_restarts = 10;
    EaConfig ea;
};

struct ExperimentConfig {
    ProblemSpec problem;
    SpaceSpec space;
    std::vector<AlgorithmEntry> algorithms;
    int T = 0;
    int n_init = 10;
    int replicates = 20;
    std::uint64_t base_seed = 0;
    std::string output_dir;

    // Hash over the scientific identity (problem, space, algorithms, T,
    // n_init); excludes replicates, seeds, and output paths so resumed or
    // extended runs keep aggregating.
    std::uint64_t hash() const;
};

// Strict parser: unknown keys are rejected with the key named.
ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Deterministic serialization of the resolved config (sorted keys).
std::string canonical_config_json(const ExperimentConfig& config);

Problem build_problem(const ProblemSpec& spec);
BehaviorSpace build_space(const Problem& problem, const SpaceSpec& spec);
std::unique_ptr<SearchAlgorithm> build_algorithm(const AlgorithmEntry& entry,
                                                 const BehaviorSpace& space);

const std::vector<std::pair<std::string, std::string>>& builtin_problems();  // name, description

}  // namespace beacon

#endif  // BEACON_CONFIG_HPP
