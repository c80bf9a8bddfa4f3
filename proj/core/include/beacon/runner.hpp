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

#ifndef BEACON_RUNNER_HPP
#define BEACON_RUNNER_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "beacon/config.hpp"

namespace beacon {

struct ReplicateOutcome {
    std::string label;
    int replicate = 0;
    bool ok = false;
    bool skipped = false;  // trace already on disk
    std::string error;
    double wall_time_sec = 0.0;
};

struct RunSummary {
    std::vector<ReplicateOutcome> outcomes;
    int failures = 0;
};

// Trace filename for one (algorithm entry, replicate) pair.
std::string trace_filename(const std::string& label, int replicate);

// Executes replicates for every algorithm entry with seeds base_seed +
// replicate index, persisting one trace file per replicate as it completes.
// Already-persisted traces are skipped (crash resume). Individual replicate
// failures are recorded and the remaining replicates continue; jobs <= 0
// selects hardware concurrency.
RunSummary run_experiment(const ExperimentConfig& config, int jobs, std::ostream& log);

}  // namespace beacon

#endif  // BEACON_RUNNER_HPP
