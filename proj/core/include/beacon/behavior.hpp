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

#ifndef BEACON_BEHAVIOR_HPP
#define BEACON_BEHAVIOR_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

namespace beacon {

// Axis-aligned box. Used both for input domains and outcome spaces.
struct Box {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    int dim() const { return static_cast<int>(lower.size()); }
    double width(int i) const { return upper[i] - lower[i]; }
    bool contains(const Eigen::VectorXd& x) const;
    Eigen::VectorXd clamp(const Eigen::VectorXd& x) const;

    // Throws std::invalid_argument unless lower[i] < upper[i] for all i and dim >= 1.
    void validate(const std::string& what) const;
};

using OutcomeBox = Box;

// Index of one behavior bin, in [0, total_bins).
struct BinId {
    std::int64_t index = -1;
    friend bool operator==(const BinId&, const BinId&) = default;
    friend auto operator<=>(const BinId&, const BinId&) = default;
};

struct BinIdHash {
    std::size_t operator()(const BinId& b) const { return std::hash<std::int64_t>()(b.index); }
};

using BinSet = std::unordered_set<BinId, BinIdHash>;

// Uniform axis-aligned grid over an outcome box. Bins partition the box:
// intervals are half-open except the last one, which includes the upper
// boundary. Outcomes outside the box clamp to the nearest edge bin, since
// noisy observations can exceed the nominal range.
class BehaviorSpace {
public:
    BehaviorSpace(OutcomeBox box, std::vector<int> bins_per_dim);

    int outcome_dim() const { return box_.dim(); }
    std::int64_t total_bins() const { return total_; }
    const OutcomeBox& box() const { return box_; }
    const std::vector<int>& bins_per_dim() const { return bins_; }

    // Projects an outcome to its bin. Per-dimension indices are combined
    // row-major (first dimension varies slowest).
    // Throws std::invalid_argument on dimension mismatch or non-finite input.
    BinId project(const Eigen::VectorXd& y) const;

    // Center of a bin; project(bin_center(b)) == b for every valid b.
    Eigen::VectorXd bin_center(BinId b) const;

private:
    OutcomeBox box_;
    std::vector<int> bins_;
    std::int64_t total_ = 0;
};

// Fraction of bins not yet observed: 1 - |observed| / total.
double behavior_gap(const BinSet& observed, const BehaviorSpace& space);

struct ReachRecord {
    int iteration = 0;               // 1-based
    std::int64_t distinct_bins = 0;  // among the first `iteration` observations
    double behavior_gap = 1.0;
    double reachability = 0.0;       // 1 - behavior_gap
};

// Per-iteration reachability over a sequence of observed bins. Monotone
// non-decreasing; hits 1 exactly when all bins have appeared.
std::vector<ReachRecord> reachability_curve(const std::vector<BinId>& trace,
                                            const BehaviorSpace& space);

}  // namespace beacon

#endif  // BEACON_BEHAVIOR_HPP
