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

#ifndef BEACON_REPORT_HPP
#define BEACON_REPORT_HPP

#include <string>
#include <vector>

#include "beacon/trace.hpp"

namespace beacon {

struct AggregateReport {
    struct Series {
        std::string algorithm;
        int replicates = 0;
        std::vector<double> mean_reach;  // per iteration, 1..n_init+T
        std::vector<double> std_reach;   // unbiased (R-1) standard deviation
    };
    std::vector<Series> series;
    int n_init = 0;
    int T = 0;
    std::uint64_t config_hash = 0;
};

// Per-algorithm per-iteration mean and standard deviation of reachability.
// Throws std::invalid_argument when traces mix config hashes or shapes, or
// when any trace carries an error.
AggregateReport aggregate(const std::vector<RunTrace>& traces);

// CSV with columns algorithm,iteration,mean_reach,std_reach.
void write_report_csv(const std::string& path, const AggregateReport& report);

// SVG line chart: one line per algorithm with a shaded +-1 std band.
void write_report_svg(const std::string& path, const AggregateReport& report);

}  // namespace beacon

#endif  // BEACON_REPORT_HPP
