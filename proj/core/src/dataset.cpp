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

#include "beacon/dataset.hpp"

#include <stdexcept>

namespace beacon {

void Dataset::add(Eigen::VectorXd x, Eigen::VectorXd y) {
    if (!inputs_.empty()) {
        if (x.size() != inputs_[0].size()) throw std::invalid_argument("Dataset::add: input dim mismatch");
        if (y.size() != outcomes_[0].size()) throw std::invalid_argument("Dataset::add: outcome dim mismatch");
    }
    if (x.size() < 1 || y.size() < 1) throw std::invalid_argument("Dataset::add: empty vector");
    if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("Dataset::add: non-finite entry");
    inputs_.push_back(std::move(x));
    outcomes_.push_back(std::move(y));
}

Eigen::VectorXd Dataset::outcome_mean() const {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(outcome_dim());
    for (const auto& y : outcomes_) mean += y;
    if (!outcomes_.empty()) mean /= static_cast<double>(outcomes_.size());
    return mean;
}

Eigen::VectorXd Dataset::stacked_centered(const Eigen::VectorXd& mean) const {
    const int n = outcome_dim();
    const int N = size();
    Eigen::VectorXd stacked(static_cast<Eigen::Index>(n) * N);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < N; ++i) {
            stacked[static_cast<Eigen::Index>(j) * N + i] = outcomes_[i][j] - mean[j];
        }
    }
    return stacked;
}

}  // namespace beacon
