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

#include "beacon/behavior.hpp"

#include <cmath>
#include <stdexcept>

namespace beacon {

bool Box::contains(const Eigen::VectorXd& x) const {
    if (x.size() != lower.size()) return false;
    for (int i = 0; i < x.size(); ++i) {
        if (x[i] < lower[i] || x[i] > upper[i]) return false;
    }
    return true;
}

Eigen::VectorXd Box::clamp(const Eigen::VectorXd& x) const {
    return x.cwiseMax(lower).cwiseMin(upper);
}

void Box::validate(const std::string& what) const {
    if (lower.size() < 1 || lower.size() != upper.size()) {
        throw std::invalid_argument(what + ": box needs matching lower/upper with dim >= 1");
    }
    for (int i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i])) {
            throw std::invalid_argument(what + ": requires lower[" + std::to_string(i) +
                                        "] < upper[" + std::to_string(i) + "], both finite");
        }
    }
}

BehaviorSpace::BehaviorSpace(OutcomeBox box, std::vector<int> bins_per_dim)
    : box_(std::move(box)), bins_(std::move(bins_per_dim)) {
    box_.validate("BehaviorSpace");
    if (static_cast<int>(bins_.size()) != box_.dim()) {
        throw std::invalid_argument("BehaviorSpace: bins_per_dim size must equal outcome dim");
    }
    total_ = 1;
    for (int b : bins_) {
        if (b < 1) throw std::invalid_argument("BehaviorSpace: bins_per_dim entries must be >= 1");
        total_ *= b;
    }
}

BinId BehaviorSpace::project(const Eigen::VectorXd& y) const {
    if (y.size() != box_.dim()) {
        throw std::invalid_argument("project: outcome dim " + std::to_string(y.size()) +
                                    " != space dim " + std::to_string(box_.dim()));
    }
    std::int64_t index = 0;
    for (int i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i])) {
            throw std::invalid_argument("project: non-finite outcome component " + std::to_string(i));
        }
        const double rel = (y[i] - box_.lower[i]) / box_.width(i);
        auto idx = static_cast<std::int64_t>(std::floor(rel * bins_[i]));
        if (idx < 0) idx = 0;                    // clamp below the box
        if (idx >= bins_[i]) idx = bins_[i] - 1; // clamp above; upper boundary -> last bin
        index = index * bins_[i] + idx;
    }
    return BinId{index};
}

Eigen::VectorXd BehaviorSpace::bin_center(BinId b) const {
    if (b.index < 0 || b.index >= total_) {
        throw std::invalid_argument("bin_center: bin index out of range");
    }
    const int n = box_.dim();
    Eigen::VectorXd center(n);
    std::int64_t rest = b.index;
    for (int i = n - 1; i >= 0; --i) {
        const std::int64_t idx = rest % bins_[i];
        rest /= bins_[i];
        center[i] = box_.lower[i] + (static_cast<double>(idx) + 0.5) * box_.width(i) / bins_[i];
    }
    return center;
}

double behavior_gap(const BinSet& observed, const BehaviorSpace& space) {
    return 1.0 - static_cast<double>(observed.size()) / static_cast<double>(space.total_bins());
}

std::vector<ReachRecord> reachability_curve(const std::vector<BinId>& trace,
                                            const BehaviorSpace& space) {
    std::vector<ReachRecord> curve;
    curve.reserve(trace.size());
    BinSet seen;
    const auto total = static_cast<double>(space.total_bins());
    for (std::size_t t = 0; t < trace.size(); ++t) {
        seen.insert(trace[t]);
        ReachRecord rec;
        rec.iteration = static_cast<int>(t + 1);
        rec.distinct_bins = static_cast<std::int64_t>(seen.size());
        rec.reachability = static_cast<double>(rec.distinct_bins) / total;
        rec.behavior_gap = 1.0 - rec.reachability;
        curve.push_back(rec);
    }
    return curve;
}

}  // namespace beacon
