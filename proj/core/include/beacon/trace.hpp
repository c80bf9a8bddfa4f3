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

#ifndef BEACON_TRACE_HPP
#define BEACON_TRACE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "beacon/behavior.hpp"

namespace beacon {

// One observation in a replicate. `bin` is the headline bin taken from the
// noiseless outcome (the metric-oracle channel); the bin of the noisy
// observation is kept alongside.
struct TraceRow {
    int iteration = 0;  // 1-based, dense
    Eigen::VectorXd input;
    Eigen::VectorXd noisy_outcome;
    Eigen::VectorXd noiseless_outcome;
    std::int64_t bin = -1;
    std::int64_t bin_noisy = -1;
    std::int64_t distinct_bins = 0;
    double reachability = 0.0;
    int pool_index = -1;              // -1 for continuous problems
    std::int64_t predicted_bin = -1;  // GP-based algorithms only
    bool constraint_fallback = false;
};

// Hyperparameters in effect after a refit, for reproducibility.
struct HyperRecord {
    int iteration = 0;  // dataset size when the refit ran
    std::string kernel_family;
    Eigen::VectorXd lengthscales;
    double signal_variance = 0.0;
    double noise_variance = 0.0;
    Eigen::MatrixXd task_coupling;
    double log_marginal = 0.0;
    bool refit_failed = false;  // fit threw; previous hyperparameters kept
    bool degenerate = false;
};

struct RunTrace {
    std::string algorithm;
    std::string problem;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    int n_init = 0;
    int T = 0;
    int input_dim = 0;
    int outcome_dim = 0;
    std::vector<int> bins_per_dim;
    Eigen::VectorXd space_lower;
    Eigen::VectorXd space_upper;
    std::vector<TraceRow> rows;
    std::vector<HyperRecord> hyper_history;
    std::string error;          // non-empty when the replicate failed part-way
    double wall_time_sec = 0.0; // in-memory only; never persisted, so reruns
                                // with the same seed stay byte-identical
};

// One replicate file: a JSON metadata header line followed by one CSV row per
// iteration. Floats are printed with %.17g so a parse round-trips exactly.
void write_trace(const std::string& path, const RunTrace& trace);
RunTrace read_trace(const std::string& path);

}  // namespace beacon

#endif  // BEACON_TRACE_HPP
