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

#ifndef BEACON_DATASET_HPP
#define BEACON_DATASET_HPP

#include <vector>

#include <Eigen/Core>

namespace beacon {

// Ordered list of (input, noisy outcome) observations. Insertion order is
// preserved; all entries must be finite.
class Dataset {
public:
    Dataset() = default;

    // Throws std::invalid_argument on dimension mismatch or non-finite entries.
    void add(Eigen::VectorXd x, Eigen::VectorXd y);

    int size() const { return static_cast<int>(inputs_.size()); }
    bool empty() const { return inputs_.empty(); }
    int input_dim() const { return inputs_.empty() ? 0 : static_cast<int>(inputs_[0].size()); }
    int outcome_dim() const { return outcomes_.empty() ? 0 : static_cast<int>(outcomes_[0].size()); }

    const std::vector<Eigen::VectorXd>& inputs() const { return inputs_; }
    const std::vector<Eigen::VectorXd>& outcomes() const { return outcomes_; }

    // Per-output empirical mean.
    Eigen::VectorXd outcome_mean() const;

    // Targets centered by `mean`, stacked output-major: entry j*N + i holds
    // outcomes[i][j] - mean[j].
    Eigen::VectorXd stacked_centered(const Eigen::VectorXd& mean) const;

private:
    std::vector<Eigen::VectorXd> inputs_;
    std::vector<Eigen::VectorXd> outcomes_;
};

}  // namespace beacon

#endif  // BEACON_DATASET_HPP
