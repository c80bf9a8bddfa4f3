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

#include "beacon/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "beacon/optimize.hpp"
#include "beacon/random.hpp"

namespace beacon {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, DistanceMetric metric) {
    switch (metric) {
        case DistanceMetric::Euclidean: return (a - b).norm();
        case DistanceMetric::Manhattan: return (a - b).lpNorm<1>();
    }
    return 0.0;
}

int clamped_k(int k, std::size_t count) {
    return std::min(k, static_cast<int>(count));
}

}  // namespace

double knn_mean_distance(const Eigen::VectorXd& y, std::span<const Eigen::VectorXd> points,
                         int k, DistanceMetric metric) {
    if (points.empty()) throw std::invalid_argument("knn_mean_distance: empty reference set");
    if (k < 1) throw std::invalid_argument("knn_mean_distance: k must be >= 1");
    const int kk = clamped_k(k, points.size());
    std::vector<double> dist(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) dist[i] = distance(y, points[i], metric);
    std::nth_element(dist.begin(), dist.begin() + (kk - 1), dist.end());
    double sum = std::accumulate(dist.begin(), dist.begin() + kk, 0.0);
    return sum / kk;
}

ReferenceSet build_references(const FittedGP& gp, const Dataset& data, const BehaviorSpace& space,
                              const NoveltyConfig& config) {
    if (data.empty()) throw std::invalid_argument("build_references: empty dataset");
    ReferenceSet refs;
    refs.dedup = config.dedup;
    BinSet occupied;
    for (const auto& x : data.inputs()) {
        const Eigen::VectorXd mu = posterior_mean(gp, x);
        const BinId bin = space.project(mu);
        if (config.dedup && !occupied.insert(bin).second) continue;  // keep first per bin
        refs.points.push_back(mu);
        refs.bins.push_back(bin);
    }
    return refs;
}

double novelty_naive(const Eigen::VectorXd& y, const ReferenceSet& refs,
                     const NoveltyConfig& config) {
    if (refs.points.empty()) throw std::invalid_argument("novelty_naive: empty reference set");
    if (!config.descending_variant) {
        return knn_mean_distance(y, refs.points, config.k, config.metric);
    }
    // k largest, for the comparison variant.
    const int kk = clamped_k(config.k, refs.points.size());
    std::vector<double> dist(refs.points.size());
    for (std::size_t i = 0; i < refs.points.size(); ++i) {
        dist[i] = distance(y, refs.points[i], config.metric);
    }
    std::nth_element(dist.begin(), dist.begin() + (kk - 1), dist.end(), std::greater<>());
    return std::accumulate(dist.begin(), dist.begin() + kk, 0.0) / kk;
}

double novelty_sorted(const Eigen::VectorXd& y, const ReferenceSet& refs,
                      const NoveltyConfig& config) {
    if (refs.points.empty()) throw std::invalid_argument("novelty_sorted: empty reference set");
    const int kk = clamped_k(config.k, refs.points.size());
    std::vector<double> dist(refs.points.size());
    for (std::size_t i = 0; i < refs.points.size(); ++i) {
        dist[i] = distance(y, refs.points[i], config.metric);
    }
    if (config.descending_variant) {
        std::sort(dist.begin(), dist.end(), std::greater<>());
    } else {
        std::sort(dist.begin(), dist.end());
    }
    // e_k^T sort(dist) / k: the indicator picks the first k sorted entries.
    double sum = 0.0;
    for (int i = 0; i < kk; ++i) sum += dist[i];
    return sum / kk;
}

Eigen::VectorXd novelty_gradient_wrt_y(const Eigen::VectorXd& y, const ReferenceSet& refs,
                                       const NoveltyConfig& config) {
    if (refs.points.empty()) throw std::invalid_argument("novelty_gradient: empty reference set");
    const int kk = clamped_k(config.k, refs.points.size());
    std::vector<std::pair<double, int>> dist(refs.points.size());
    for (std::size_t i = 0; i < refs.points.size(); ++i) {
        dist[i] = {distance(y, refs.points[i], config.metric), static_cast<int>(i)};
    }
    if (config.descending_variant) {
        std::partial_sort(dist.begin(), dist.begin() + kk, dist.end(), std::greater<>());
    } else {
        std::partial_sort(dist.begin(), dist.begin() + kk, dist.end());
    }
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(y.size());
    for (int i = 0; i < kk; ++i) {
        const auto& p = refs.points[dist[i].second];
        if (config.metric == DistanceMetric::Euclidean) {
            if (dist[i].first > 0.0) grad += (y - p) / dist[i].first;
        } else {
            for (int c = 0; c < y.size(); ++c) {
                const double diff = y[c] - p[c];
                grad[c] += diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
            }
        }
    }
    return grad / kk;
}

double acquisition_value(const Eigen::VectorXd& x, const PathSample& path,
                         const ReferenceSet& refs, const NoveltyConfig& config,
                         const UgConstraint* constraint, const FittedGP* gp,
                         const BehaviorSpace* space) {
    if (constraint != nullptr) {
        if (gp == nullptr || space == nullptr) {
            throw std::invalid_argument("acquisition_value: constraint requires gp and space");
        }
        if (constraint->forbids(space->project(posterior_mean(*gp, x)))) return kNegInf;
    }
    return novelty_sorted(path.value(x), refs, config);
}

ContinuousArgmax maximize_continuous(const PathSample& path, const ReferenceSet& refs,
                                     const NoveltyConfig& config, const Box& bounds,
                                     int restarts, std::uint64_t seed,
                                     const UgConstraint* constraint, const FittedGP* gp,
                                     const BehaviorSpace* space, ConstraintMode mode,
                                     double soft_penalty) {
    bounds.validate("maximize_continuous");
    if (restarts < 1) throw std::invalid_argument("maximize_continuous: restarts must be >= 1");
    if (constraint != nullptr && (gp == nullptr || space == nullptr)) {
        throw std::invalid_argument("maximize_continuous: constraint requires gp and space");
    }

    // Ascent objective: minimize the negated fixed-permutation novelty. The
    // permutation refreshes at every evaluation, so each line-search step sees
    // the current nearest set. The constraint indicator is piecewise constant
    // and enters only at selection time.
    const ObjectiveFn objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
        const Eigen::VectorXd y = path.value(x);
        if (grad != nullptr) {
            const Eigen::VectorXd dy = novelty_gradient_wrt_y(y, refs, config);
            *grad = -(path.jacobian(x).transpose() * dy);
        }
        return -novelty_sorted(y, refs, config);
    };

    const auto feasible_at = [&](const Eigen::VectorXd& x) {
        if (constraint == nullptr) return true;
        return !constraint->forbids(space->project(posterior_mean(*gp, x)));
    };

    struct Candidate {
        Eigen::VectorXd x;
        double value;
        bool feasible;
    };
    std::vector<Candidate> candidates;
    Rng rng(mix_seed(seed, 0x61637175));
    OptimizeOptions opt;
    opt.max_iterations = 60;

    // Screen starts before ascending: a uniform sample over the box plus the
    // GP's own training inputs. The anchors matter in larger boxes, where the
    // acquisition structure concentrates in small neighborhoods of past
    // observations that uniform screening almost never hits.
    const int raw_count = std::max(64 * restarts, 256);
    std::vector<std::pair<double, Eigen::VectorXd>> screened;
    screened.reserve(raw_count + path.gp().train_inputs.size());
    for (int i = 0; i < raw_count; ++i) {
        Eigen::VectorXd x = rng.uniform_vector(bounds.lower, bounds.upper);
        const double value = novelty_sorted(path.value(x), refs, config);
        screened.emplace_back(value, std::move(x));
    }
    for (const auto& anchor : path.gp().train_inputs) {
        Eigen::VectorXd x = bounds.clamp(anchor);
        const double value = novelty_sorted(path.value(x), refs, config);
        screened.emplace_back(value, std::move(x));
    }
    std::sort(screened.begin(), screened.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [value, x] : screened) {
        // Every screened point stays in the candidate pool; only the top ones
        // seed an ascent.
        candidates.push_back({x, value, feasible_at(x)});
    }
    for (int r = 0; r < restarts; ++r) {
        const Eigen::VectorXd& start = screened[r % screened.size()].second;
        OptimizeResult res = minimize_lbfgs(objective, start, bounds.lower, bounds.upper, opt);
        candidates.push_back({res.x, -res.value, feasible_at(res.x)});
    }

    const auto score = [&](const Candidate& c) {
        if (c.feasible) return c.value;
        return mode == ConstraintMode::Hard ? kNegInf : c.value - soft_penalty;
    };
    const Candidate* best = &candidates.front();
    for (const auto& c : candidates) {
        if (score(c) > score(*best)) best = &c;
    }

    ContinuousArgmax out;
    if (score(*best) == kNegInf) {
        // Every start and optimum is infeasible: fall back to the best
        // unconstrained acquisition, flagged.
        for (const auto& c : candidates) {
            if (c.value > out.value || out.x.size() == 0) {
                out.x = c.x;
                out.value = c.value;
            }
        }
        out.constraint_fallback = true;
        return out;
    }
    out.x = best->x;
    out.value = best->value;
    out.constraint_fallback = false;
    return out;
}

DiscreteArgmax maximize_discrete(const Eigen::MatrixXd& sampled_outcomes,
                                 const ReferenceSet& refs, const NoveltyConfig& config,
                                 const std::vector<char>& evaluated,
                                 const std::vector<char>* feasible) {
    const int C = static_cast<int>(sampled_outcomes.rows());
    if (static_cast<int>(evaluated.size()) != C) {
        throw std::invalid_argument("maximize_discrete: evaluated mask size mismatch");
    }
    if (feasible != nullptr && static_cast<int>(feasible->size()) != C) {
        throw std::invalid_argument("maximize_discrete: feasible mask size mismatch");
    }

    const auto scan = [&](bool respect_constraint) {
        DiscreteArgmax best;
        for (int c = 0; c < C; ++c) {
            if (evaluated[c]) continue;
            if (respect_constraint && feasible != nullptr && !(*feasible)[c]) continue;
            const double value = novelty_sorted(sampled_outcomes.row(c).transpose(), refs, config);
            if (best.index < 0 || value > best.value) {  // ties keep the lowest index
                best.index = c;
                best.value = value;
            }
        }
        return best;
    };

    bool any_unevaluated = false;
    for (int c = 0; c < C; ++c) {
        if (!evaluated[c]) {
            any_unevaluated = true;
            break;
        }
    }
    if (!any_unevaluated) throw std::runtime_error("maximize_discrete: pool exhausted");

    DiscreteArgmax best = scan(true);
    if (best.index < 0) {
        best = scan(false);
        best.constraint_fallback = true;
    }
    return best;
}

}  // namespace beacon
