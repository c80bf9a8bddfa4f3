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

#ifndef BEACON_PROBLEMS_HPP
#define BEACON_PROBLEMS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "beacon/behavior.hpp"
#include "beacon/random.hpp"

namespace beacon {

// Noisy observation plus the noiseless value. The noiseless channel exists
// for metric computation only; algorithms must consume `noisy`.
struct QueryResult {
    Eigen::VectorXd noisy;
    Eigen::VectorXd noiseless;
};

class ContinuousProblem {
public:
    ContinuousProblem(std::string name, Box bounds, int outcome_dim,
                      std::function<Eigen::VectorXd(const Eigen::VectorXd&)> evaluator,
                      double noise_std);

    const std::string& name() const { return name_; }
    const Box& bounds() const { return bounds_; }
    int input_dim() const { return bounds_.dim(); }
    int outcome_dim() const { return outcome_dim_; }
    double noise_std() const { return noise_std_; }
    void set_noise_std(double s) { noise_std_ = s; }

    Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const;  // noiseless
    QueryResult query(const Eigen::VectorXd& x, Rng& rng) const;

private:
    std::string name_;
    Box bounds_;
    int outcome_dim_;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> evaluator_;
    double noise_std_;
};

// Finite candidate set with hidden outcomes behind the query interface.
class PoolProblem {
public:
    // Throws std::invalid_argument on duplicate candidate rows or non-finite
    // entries.
    PoolProblem(std::string name, Eigen::MatrixXd candidates, Eigen::MatrixXd outcomes,
                double noise_std);

    const std::string& name() const { return name_; }
    int size() const { return static_cast<int>(candidates_.rows()); }
    int input_dim() const { return static_cast<int>(candidates_.cols()); }
    int outcome_dim() const { return static_cast<int>(outcomes_.cols()); }
    double noise_std() const { return noise_std_; }
    void set_noise_std(double s) { noise_std_ = s; }

    const Eigen::MatrixXd& candidates() const { return candidates_; }
    Eigen::VectorXd candidate(int index) const { return candidates_.row(index).transpose(); }

    QueryResult query(int index, Rng& rng) const;

    // Metric-oracle channel: full outcome matrix, for behavior-space
    // construction and reachability accounting only. Never hand this to a
    // search algorithm.
    const Eigen::MatrixXd& oracle_outcomes() const { return outcomes_; }

private:
    std::string name_;
    Eigen::MatrixXd candidates_;
    Eigen::MatrixXd outcomes_;
    double noise_std_;
};

class Problem {
public:
    Problem(ContinuousProblem p) : impl_(std::move(p)) {}
    Problem(PoolProblem p) : impl_(std::move(p)) {}

    bool is_pool() const { return std::holds_alternative<PoolProblem>(impl_); }
    const ContinuousProblem& continuous() const;
    const PoolProblem& pool() const;

    const std::string& name() const;
    int input_dim() const;
    int outcome_dim() const;
    double noise_std() const;

    // Input box: declared bounds for continuous problems, per-feature
    // min/max of the candidate matrix for pools.
    Box input_box() const;

private:
    std::variant<ContinuousProblem, PoolProblem> impl_;
};

// Standard synthetic evaluators.
double ackley(const Eigen::VectorXd& x);           // a=20, b=0.2, c=2pi
double rosenbrock(const Eigen::VectorXd& x);
double styblinski_tang(const Eigen::VectorXd& x);

// Two outputs over [-5, 5]^6 with a plus/cross-shaped outcome scatter: each
// output is a linear stretch in one input pair gated by a radial decay in
// another, so the joint distribution has a dense center and sparse tails.
//   y1 = (x1 + x2) * exp(-(x3^2 + x4^2) / (2 * 1.5^2))
//   y2 = (x5 + x6) * exp(-(x1^2 + x2^2) / (2 * 1.5^2))
// Throws std::invalid_argument outside the box.
Eigen::VectorXd multi_output_plus(const Eigen::VectorXd& x);

// Problem factories with standard input domains. noise_std < 0 selects the
// default of 1% of the empirical outcome standard deviation (100k-sample
// estimate with the fixed range seed).
ContinuousProblem make_ackley(int dimension, double noise_std = 0.0);
ContinuousProblem make_rosenbrock(int dimension, double noise_std = 0.0);
ContinuousProblem make_styblinski_tang(int dimension, double noise_std = 0.0);
ContinuousProblem make_multi_output_plus(double noise_std = 0.0);

// Seed of record for empirical range estimation.
inline constexpr std::uint64_t kRangeSeed = 20240613;

struct RangeSpec {
    enum class Provenance { Analytic, Empirical };
    std::vector<std::pair<double, double>> ranges;  // per output (lo, hi)
    Provenance provenance = Provenance::Analytic;
    int sample_count = 0;
    std::uint64_t seed = 0;

    void validate() const;
};

// Per-output outcome range: 100,000 uniform noiseless samples for continuous
// problems (fixed recorded seed), the full outcome matrix for pools.
RangeSpec estimate_outcome_range(const Problem& problem, int sample_count = 100000,
                                 std::uint64_t seed = kRangeSeed);

// Behavior space over the problem's outcome range. An absent range spec means
// "auto" (estimate_outcome_range with defaults). Throws on degenerate ranges
// (hi - lo < 1e-9).
BehaviorSpace make_space(const Problem& problem, const std::vector<int>& bins_per_dim,
                         const std::optional<RangeSpec>& range = std::nullopt);

// Default noise level: 1% of the empirical outcome standard deviation
// (pooled across outputs).
double default_noise_std(const Problem& problem);

// Pool CSV format: header row x1,...,xd,y1,...,yn, one candidate per line,
// decimal-point floats, no missing values. Exact duplicate rows are dropped
// with a warning; malformed rows raise errors naming the line.
PoolProblem load_pool(const std::string& path, int input_dim, int outcome_dim,
                      std::vector<std::string>* warnings = nullptr, double noise_std = 0.0);

void write_pool_csv(const std::string& path, const Eigen::MatrixXd& candidates,
                    const Eigen::MatrixXd& outcomes);

}  // namespace beacon

#endif  // BEACON_PROBLEMS_HPP
