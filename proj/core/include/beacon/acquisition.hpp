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

#ifndef BEACON_ACQUISITION_HPP
#define BEACON_ACQUISITION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include <Eigen/Core>

#include "beacon/behavior.hpp"
#include "beacon/dataset.hpp"
#include "beacon/gp.hpp"
#include "beacon/sampling.hpp"

namespace beacon {

enum class DistanceMetric { Euclidean, Manhattan };

struct NoveltyConfig {
    int k = 10;                                        // clamped to |refs| at evaluation time
    DistanceMetric metric = DistanceMetric::Euclidean;
    bool dedup = true;
    // Selects the k largest distances instead of the k nearest. Off by
    // default; kept only so the two selection rules can be compared.
    bool descending_variant = false;
};

// Reference outcomes the novelty is measured against: posterior means at the
// observed inputs (never the raw noisy outcomes), optionally deduplicated to
// one representative per occupied behavior bin.
struct ReferenceSet {
    std::vector<Eigen::VectorXd> points;
    std::vector<BinId> bins;
    bool dedup = false;
};

// Behavior bins the search must not target.
struct UgConstraint {
    std::unordered_set<std::int64_t> forbidden_bins;
    bool forbids(BinId b) const { return forbidden_bins.count(b.index) > 0; }
};

// Mean distance from y to the k nearest of `points`. Shared primitive; also
// used on raw observed outcomes by the evolutionary baseline.
double knn_mean_distance(const Eigen::VectorXd& y, std::span<const Eigen::VectorXd> points,
                         int k, DistanceMetric metric);

// Posterior means at all observed inputs; with dedup, the first-inserted
// representative per occupied bin (bin taken from the posterior mean) is kept,
// cutting acquisition cost from O(N) to O(|B|).
ReferenceSet build_references(const FittedGP& gp, const Dataset& data, const BehaviorSpace& space,
                              const NoveltyConfig& config);

// Mean of the k smallest distances, via partial selection.
double novelty_naive(const Eigen::VectorXd& y, const ReferenceSet& refs,
                     const NoveltyConfig& config);

// Same value through the sort-then-select form: full distance vector, sort,
// indicator selection, average. Agrees with novelty_naive on every input.
double novelty_sorted(const Eigen::VectorXd& y, const ReferenceSet& refs,
                      const NoveltyConfig& config);

// Gradient of the sort-based novelty with the permutation held fixed at y
// (the almost-everywhere gradient). Zero where a distance vanishes.
Eigen::VectorXd novelty_gradient_wrt_y(const Eigen::VectorXd& y, const ReferenceSet& refs,
                                       const NoveltyConfig& config);

// alpha_NS(x | g, D): novelty of the sampled outcome g(x) against the
// references. With a constraint, returns -inf when the posterior-mean
// prediction at x lands in a forbidden bin.
double acquisition_value(const Eigen::VectorXd& x, const PathSample& path,
                         const ReferenceSet& refs, const NoveltyConfig& config,
                         const UgConstraint* constraint = nullptr,
                         const FittedGP* gp = nullptr, const BehaviorSpace* space = nullptr);

enum class ConstraintMode {
    Hard,        // infeasible points score -inf
    SoftPenalty  // infeasible points score value - penalty (selection only)
};

struct ContinuousArgmax {
    Eigen::VectorXd x;
    double value = 0.0;              // acquisition at x (unpenalized)
    bool constraint_fallback = false;  // no feasible start/optimum was found
};

// Multi-start quasi-Newton ascent with box projection. The k-nearest
// permutation is refreshed at every objective evaluation. The returned
// acquisition is never below the acquisition at any start point.
ContinuousArgmax maximize_continuous(const PathSample& path, const ReferenceSet& refs,
                                     const NoveltyConfig& config, const Box& bounds,
                                     int restarts, std::uint64_t seed,
                                     const UgConstraint* constraint = nullptr,
                                     const FittedGP* gp = nullptr,
                                     const BehaviorSpace* space = nullptr,
                                     ConstraintMode mode = ConstraintMode::Hard,
                                     double soft_penalty = 1e6);

struct DiscreteArgmax {
    int index = -1;
    double value = 0.0;
    bool constraint_fallback = false;
};

// Exact argmax over unevaluated candidates given their sampled outcomes
// (C x n, aligned with the pool). Never returns an evaluated index; ties break
// toward the lowest index. `feasible`, when given, masks candidates whose
// predicted bin is forbidden; if no unevaluated candidate is feasible the scan
// falls back to all unevaluated candidates and sets constraint_fallback.
// Throws std::runtime_error when every candidate is evaluated.
DiscreteArgmax maximize_discrete(const Eigen::MatrixXd& sampled_outcomes,
                                 const ReferenceSet& refs, const NoveltyConfig& config,
                                 const std::vector<char>& evaluated,
                                 const std::vector<char>* feasible = nullptr);

}  // namespace beacon

#endif  // BEACON_ACQUISITION_HPP
