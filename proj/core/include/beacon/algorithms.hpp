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

#ifndef BEACON_ALGORITHMS_HPP
#define BEACON_ALGORITHMS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "beacon/acquisition.hpp"
#include "beacon/behavior.hpp"
#include "beacon/dataset.hpp"
#include "beacon/gp.hpp"
#include "beacon/problems.hpp"
#include "beacon/sobol.hpp"
#include "beacon/trace.hpp"

namespace beacon {

struct Proposal {
    Eigen::VectorXd x;
    int pool_index = -1;
    std::int64_t predicted_bin = -1;  // bin of the posterior mean at x, when a GP is in play
    bool constraint_fallback = false;
};

// One search strategy driving Algorithm-1-style loops: propose one query per
// step, learn about every observation (including the seeding stage) through
// observe(). Instances are single-replicate state; build a fresh one per run.
class SearchAlgorithm {
public:
    virtual ~SearchAlgorithm() = default;
    virtual std::string name() const = 0;
    virtual Proposal propose(const Problem& problem, const Dataset& data,
                             const std::vector<char>& evaluated, Rng& rng) = 0;
    virtual void observe(const Eigen::VectorXd& /*x*/, int /*pool_index*/,
                         const Eigen::VectorXd& /*noisy_outcome*/) {}
    virtual std::vector<HyperRecord> hyper_history() const { return {}; }
};

// Shared GP configuration for the surrogate-based strategies.
struct GpConfig {
    KernelFamily family = KernelFamily::Matern52Ard;
    int hyper_restarts = 2;
    int hyper_refit_every = 1;  // refit hyperparameters every m proposals
    bool identity_coupling = false;
    double noise_floor = 1e-6;
};

struct BeaconConfig {
    GpConfig gp;
    NoveltyConfig novelty;
    int num_features = 1024;  // pathwise-sample fidelity
    int acq_restarts = 10;
    std::optional<UgConstraint> constraint;  // set for ug-beacon
    ConstraintMode constraint_mode = ConstraintMode::Hard;
};

// BEACON: fit the MOGP, draw one posterior path per iteration, deduplicate
// references by behavior bin, and maximize the sampled novelty (multi-start
// gradient ascent on boxes, exact scan on pools).
class BeaconSearch : public SearchAlgorithm {
public:
    BeaconSearch(BehaviorSpace space, BeaconConfig config);

    std::string name() const override { return config_.constraint ? "ug-beacon" : "beacon"; }
    Proposal propose(const Problem& problem, const Dataset& data,
                     const std::vector<char>& evaluated, Rng& rng) override;
    std::vector<HyperRecord> hyper_history() const override { return history_; }

private:
    std::shared_ptr<const FittedGP> refit(const Problem& problem, const Dataset& data, Rng& rng);

    BehaviorSpace space_;
    BeaconConfig config_;
    std::optional<HyperFitResult> hyper_;
    int proposals_ = 0;
    std::vector<HyperRecord> history_;
};

// Uniform random search over the box, or over unevaluated pool candidates.
class RandomSearch : public SearchAlgorithm {
public:
    std::string name() const override { return "rs"; }
    Proposal propose(const Problem& problem, const Dataset& data,
                     const std::vector<char>& evaluated, Rng& rng) override;
};

// Scrambled Sobol sequence mapped to the box; pool candidates are matched by
// nearest normalized input.
class SobolSearch : public SearchAlgorithm {
public:
    std::string name() const override { return "sobol"; }
    Proposal propose(const Problem& problem, const Dataset& data,
                     const std::vector<char>& evaluated, Rng& rng) override;

private:
    std::optional<SobolSequence> sequence_;
};

// Maximum-variance active learning on the same GP machinery.
class MaxVarSearch : public SearchAlgorithm {
public:
    MaxVarSearch(BehaviorSpace space, GpConfig config, int acq_restarts = 10);

    std::string name() const override { return "maxvar"; }
    Proposal propose(const Problem& problem, const Dataset& data,
                     const std::vector<char>& evaluated, Rng& rng) override;
    std::vector<HyperRecord> hyper_history() const override { return history_; }

private:
    BehaviorSpace space_;
    GpConfig config_;
    int acq_restarts_;
    std::optional<HyperFitResult> hyper_;
    int proposals_ = 0;
    std::vector<HyperRecord> history_;
};

struct EaConfig {
    int population_size = 20;
    double mutation_scale = 0.1;  // fraction of box width
    int novelty_k = 10;
};

// Evolutionary novelty search: the most-novel population member (novelty
// measured against all observed noisy outcomes) parents a Gaussian-mutated
// child; the least-novel member is replaced once the population is full.
// Continuous problems only.
class NsEaSearch : public SearchAlgorithm {
public:
    explicit NsEaSearch(EaConfig config);

    std::string name() const override { return "ns-ea"; }
    Proposal propose(const Problem& problem, const Dataset& data,
                     const std::vector<char>& evaluated, Rng& rng) override;
    void observe(const Eigen::VectorXd& x, int pool_index,
                 const Eigen::VectorXd& noisy_outcome) override;

private:
    EaConfig config_;
    std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> population_;  // (x, y)
    std::vector<Eigen::VectorXd> archive_;                                 // all observed outcomes
};

struct RunConfig {
    int T = 100;
    int n_init = 10;
    std::uint64_t seed = 0;
};

// Seeds with n_init uniform queries, runs T algorithm steps, and records the
// per-iteration trace with reachability computed on the noiseless-outcome
// bins. Step errors are captured in trace.error with the partial trace kept.
RunTrace run_replicate(SearchAlgorithm& algorithm, const Problem& problem,
                       const BehaviorSpace& space, const RunConfig& config);

}  // namespace beacon

#endif  // BEACON_ALGORITHMS_HPP
