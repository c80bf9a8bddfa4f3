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

#ifndef BEACON_SOBOL_HPP
#define BEACON_SOBOL_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace beacon {

// Gray-code Sobol sequence with Joe-Kuo direction numbers, optionally
// scrambled by a seeded per-dimension digital XOR shift. Index 0 (the origin)
// is skipped: the first unscrambled point is (0.5, ..., 0.5).
class SobolSequence {
public:
    // Throws std::invalid_argument when dimension exceeds max_dimension().
    explicit SobolSequence(int dimension,
                           std::optional<std::uint64_t> scramble_seed = std::nullopt);

    static int max_dimension();

    int dimension() const { return dim_; }

    // Next point in [0, 1)^d.
    Eigen::VectorXd next();

private:
    int dim_;
    std::uint64_t index_ = 0;
    std::vector<std::vector<std::uint32_t>> direction_;  // per dim, 32 entries
    std::vector<std::uint32_t> state_;
    std::vector<std::uint32_t> shift_;
};

}  // namespace beacon

#endif  // BEACON_SOBOL_HPP
