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

#include "beacon/algorithms.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "beacon/optimize.hpp"
#include "beacon/sampling.hpp"

namespace beacon {

namespace {

HyperRecord to_record(const HyperFitResult& fit, int iteration, bool refit_failed) {
    HyperRecord rec;
    rec.iteration = iteration;
    rec.kernel_family = to_string(fit.spec.family);
    rec.lengthscales = fit.spec.lengthscales;
    rec.signal_variance = fit.spec.signal_variance;
    rec.noise_variance = fit.spec.noise_variance;
    rec.task_coupling = fit.spec.task_coupling;
    rec.log_marginal = fit.log_marginal;
    rec.refit_failed = refit_failed;
    rec.degenerate = fit.degenerate;
    return rec;
}

// Hyperparameter refit with fallback: a failed fit keeps the previous
// hyperparameters and flags the record.
std::optional<HyperFitResult> scheduled_refit(const Dataset& data,
                                              const GpConfig& config, int proposals,
                                              std::optional<HyperFitResult>& current,
                                              std::vector<HyperRecord>& history, Rng& rng) {
    const bool due = !current.has_value() || (config.hyper_refit_every > 0 &&
                                              proposals % config.hyper_refit_every == 0);
    if (!due) return current;
    HyperFitOptions options;
    options.noise_floor = config.noise_floor;
    options.identity_coupling = config.identity_coupling;
    if (current.has_value()) options.warm_start = &current->packed;
    const std::uint64_t seed = rng.raw();
    try {
        HyperFitResult fit =
            fit_hyperparameters(data, config.family, config.hyper_restarts, seed, options);
        current = std::move(fit);
        history.push_back(to_record(*current, data.size(), false));
    } catch (const std::exception&) {
        if (!current.has_value()) {
            HyperFitResult fallback;
            fallback.spec = heuristic_kernel(data, config.family, config.noise_floor);
            fallback.packed = PackedKernel::from_spec(fallback.spec, config.identity_coupling);
            fallback.log_marginal = -std::numeric_limits<double>::infinity();
            current = std::move(fallback);
        }
        history.push_back(to_record(*current, data.size(), true));
    }
    return current;
}

int nearest_unevaluated(const Eigen::VectorXd& target_unit, const PoolProblem& pool,
                        const Box& box, const std::vector<char>& evaluated) {
    int best = -1;
    double best_dist = std::numeric_limits<double>::infinity();
    const Eigen::VectorXd widths = box.upper - box.lower;
    for (int i = 0; i < pool.size(); ++i) {
        if (evaluated[i]) continue;
        const Eigen::VectorXd unit =
            (pool.candidate(i) - box.lower).cwiseQuotient(widths);
        const double dist = (unit - target_unit).squaredNorm();
        if (dist < best_dist) {
            best_dist = dist;
            best = i;
        }
    }
    if (best < 0) throw std::runtime_error("pool exhausted");
    return best;
}

int uniform_unevaluated(const std::vector<char>& evaluated, Rng& rng) {
    std::vector<int> open;
    for (int i = 0; i < static_cast<int>(evaluated.size()); ++i) {
        if (!evaluated[i]) open.push_back(i);
    }
    if (open.empty()) throw std::runtime_error("pool exhausted");
    return open[static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(open.size())))];
}

}  // namespace

BeaconSearch::BeaconSearch(BehaviorSpace space, BeaconConfig config)
    : space_(std::move(space)), config_(std::move(config)) {
    if (config_.novelty.k < 1) throw std::invalid_argument("BeaconSearch: k must be >= 1");
    if (config_.num_features < 1) throw std::invalid_argument("BeaconSearch: num_features >= 1");
}

std::shared_ptr<const FittedGP> BeaconSearch::refit(const Problem& problem, const Dataset& data,
                                                    Rng& rng) {
    scheduled_refit(data, config_.gp, proposals_, hyper_, history_, rng);
    return std::make_shared<const FittedGP>(fit_posterior(data, hyper_->spec));
}

Proposal BeaconSearch::propose(const Problem& problem, const Dataset& data,
                               const std::vector<char>& evaluated, Rng& rng) {
    if (data.empty()) throw std::invalid_argument("BeaconSearch: needs seed observations");
    auto gp = refit(problem, data, rng);
    ++proposals_;

    const ReferenceSet refs = build_references(*gp, data, space_, config_.novelty);
    const UgConstraint* constraint =
        config_.constraint.has_value() ? &*config_.constraint : nullptr;

    Proposal proposal;
    if (problem.is_pool()) {
        const PoolProblem& pool = problem.pool();
        const int C = pool.size();
        const int n = pool.outcome_dim();

        std::vector<char> feasible;
        if (constraint != nullptr) {
            feasible.assign(C, 1);
            for (int i = 0; i < C; ++i) {
                if (evaluated[i]) continue;
                const BinId bin = space_.project(posterior_mean(*gp, pool.candidate(i)));
                feasible[i] = constraint->forbids(bin) ? 0 : 1;
            }
        }

        // Thompson sample over the unevaluated candidates: pathwise draw for
        // spectral kernels, one exact joint draw otherwise.
        Eigen::MatrixXd sampled = Eigen::MatrixXd::Zero(C, n);
        const std::uint64_t sample_seed = rng.raw();
        if (gp->kernel.family == KernelFamily::Tanimoto) {
            std::vector<Eigen::VectorXd> open;
            std::vector<int> open_index;
            for (int i = 0; i < C; ++i) {
                if (!evaluated[i]) {
                    open.push_back(pool.candidate(i));
                    open_index.push_back(i);
                }
            }
            if (!open.empty()) {
                const Eigen::MatrixXd draws = exact_joint_sample(*gp, open, sample_seed);
                for (std::size_t r = 0; r < open_index.size(); ++r) {
                    sampled.row(open_index[r]) = draws.row(static_cast<int>(r));
                }
            }
        } else {
            const PathSample path = draw_path(gp, config_.num_features, sample_seed);
            for (int i = 0; i < C; ++i) {
                if (!evaluated[i]) sampled.row(i) = path.value(pool.candidate(i)).transpose();
            }
        }

        const DiscreteArgmax pick =
            maximize_discrete(sampled, refs, config_.novelty, evaluated,
                              constraint != nullptr ? &feasible : nullptr);
        proposal.pool_index = pick.index;
        proposal.x = pool.candidate(pick.index);
        proposal.constraint_fallback = pick.constraint_fallback;
    } else {
        const PathSample path = draw_path(gp, config_.num_features, rng.raw());
        const ContinuousArgmax pick = maximize_continuous(
            path, refs, config_.novelty, problem.continuous().bounds(), config_.acq_restarts,
            rng.raw(), constraint, gp.get(), &space_, config_.constraint_mode);
        proposal.x = pick.x;
        proposal.constraint_fallback = pick.constraint_fallback;
    }
    proposal.predicted_bin = space_.project(posterior_mean(*gp, proposal.x)).index;
    return proposal;
}

Proposal RandomSearch::propose(const Problem& problem, const Dataset&,
                               const std::vector<char>& evaluated, Rng& rng) {
    Proposal proposal;
    if (problem.is_pool()) {
        proposal.pool_index = uniform_unevaluated(evaluated, rng);
        proposal.x = problem.pool().candidate(proposal.pool_index);
    } else {
        const Box& box = problem.continuous().bounds();
        proposal.x = rng.uniform_vector(box.lower, box.upper);
    }
    return proposal;
}

Proposal SobolSearch::propose(const Problem& problem, const Dataset&,
                              const std::vector<char>& evaluated, Rng& rng) {
    if (!sequence_.has_value()) {
        sequence_.emplace(problem.input_dim(), rng.raw());
    }
    const Eigen::VectorXd unit = sequence_->next();
    const Box box = problem.input_box();

    Proposal proposal;
    if (problem.is_pool()) {
        proposal.pool_index = nearest_unevaluated(unit, problem.pool(), box, evaluated);
        proposal.x = problem.pool().candidate(proposal.pool_index);
    } else {
        proposal.x = box.lower + unit.cwiseProduct(box.upper - box.lower);
    }
    return proposal;
}

MaxVarSearch::MaxVarSearch(BehaviorSpace space, GpConfig config, int acq_restarts)
    : space_(std::move(space)), config_(std::move(config)), acq_restarts_(acq_restarts) {}

Proposal MaxVarSearch::propose(const Problem& problem, const Dataset& data,
                               const std::vector<char>& evaluated, Rng& rng) {
    if (data.empty()) throw std::invalid_argument("MaxVarSearch: needs seed observations");
    scheduled_refit(data, config_, proposals_, hyper_, history_, rng);
    ++proposals_;
    const auto gp = std::make_shared<const FittedGP>(fit_posterior(data, hyper_->spec));

    Proposal proposal;
    if (problem.is_pool()) {
        const PoolProblem& pool = problem.pool();
        int best = -1;
        double best_var = -1.0;
        for (int i = 0; i < pool.size(); ++i) {
            if (evaluated[i]) continue;
            const double v = posterior_variance(*gp, pool.candidate(i)).sum();
            if (best < 0 || v > best_var) {
                best = i;
                best_var = v;
            }
        }
        if (best < 0) throw std::runtime_error("pool exhausted");
        proposal.pool_index = best;
        proposal.x = pool.candidate(best);
    } else {
        const Box& box = problem.continuous().bounds();
        const FittedGP& model = *gp;
        const int N = model.size();
        const int n = model.outcome_dim();

        // Negated total posterior variance with analytic gradient. The prior
        // self-covariance is constant for stationary kernels, so only the
        // data correction moves.
        const ObjectiveFn objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
            Eigen::VectorXd kxv(N);
            for (int i = 0; i < N; ++i) kxv[i] = input_kernel(model.kernel, x, model.train_inputs[i]);
            Eigen::MatrixXd cross(static_cast<Eigen::Index>(N) * n, n);
            for (int j = 0; j < n; ++j) {
                for (int jp = 0; jp < n; ++jp) {
                    cross.block(static_cast<Eigen::Index>(jp) * N, j, N, 1) =
                        (model.kernel.signal_variance * model.kernel.task_coupling(jp, j)) * kxv;
                }
            }
            const Eigen::MatrixXd v = model.factor.triangularView<Eigen::Lower>().solve(cross);
            double total = 0.0;
            for (int j = 0; j < n; ++j) {
                total += model.kernel.signal_variance * model.kernel.task_coupling(j, j) -
                         v.col(j).squaredNorm();
            }
            if (grad != nullptr) {
                const int d = static_cast<int>(x.size());
                Eigen::MatrixXd dk(N, d);
                for (int i = 0; i < N; ++i) {
                    dk.row(i) =
                        input_kernel_gradient(model.kernel, x, model.train_inputs[i]).transpose();
                }
                grad->setZero(d);
                for (int j = 0; j < n; ++j) {
                    Eigen::MatrixXd dcross(static_cast<Eigen::Index>(N) * n, d);
                    for (int jp = 0; jp < n; ++jp) {
                        dcross.block(static_cast<Eigen::Index>(jp) * N, 0, N, d) =
                            (model.kernel.signal_variance * model.kernel.task_coupling(jp, j)) * dk;
                    }
                    const Eigen::MatrixXd dv =
                        model.factor.triangularView<Eigen::Lower>().solve(dcross);
                    *grad += 2.0 * (dv.transpose() * v.col(j));  // d(-var)/dx
                }
            }
            return -total;
        };

        OptimizeOptions opt;
        opt.max_iterations = 60;
        Eigen::VectorXd best_x;
        double best_value = -std::numeric_limits<double>::infinity();
        for (int r = 0; r < acq_restarts_; ++r) {
            const Eigen::VectorXd start = rng.uniform_vector(box.lower, box.upper);
            const double start_value = -objective(start, nullptr);
            if (start_value > best_value) {
                best_value = start_value;
                best_x = start;
            }
            const OptimizeResult res = minimize_lbfgs(objective, start, box.lower, box.upper, opt);
            if (-res.value > best_value) {
                best_value = -res.value;
                best_x = res.x;
            }
        }
        proposal.x = best_x;
    }
    proposal.predicted_bin = space_.project(posterior_mean(*gp, proposal.x)).index;
    return proposal;
}

NsEaSearch::NsEaSearch(EaConfig config) : config_(config) {
    if (config_.population_size < 2) throw std::invalid_argument("NsEaSearch: population_size >= 2");
    if (!(config_.mutation_scale > 0.0 && config_.mutation_scale <= 1.0)) {
        throw std::invalid_argument("NsEaSearch: mutation_scale in (0, 1]");
    }
    if (config_.novelty_k < 1) throw std::invalid_argument("NsEaSearch: novelty_k >= 1");
}

void NsEaSearch::observe(const Eigen::VectorXd& x, int, const Eigen::VectorXd& noisy_outcome) {
    archive_.push_back(noisy_outcome);
    if (static_cast<int>(population_.size()) < config_.population_size) {
        population_.emplace_back(x, noisy_outcome);
        return;
    }
    // Replace the least-novel member (novelty against all observed outcomes).
    int worst = 0;
    double worst_novelty = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < population_.size(); ++i) {
        const double nov = knn_mean_distance(population_[i].second, archive_, config_.novelty_k,
                                             DistanceMetric::Euclidean);
        if (nov < worst_novelty) {
            worst_novelty = nov;
            worst = static_cast<int>(i);
        }
    }
    population_[worst] = {x, noisy_outcome};
}

Proposal NsEaSearch::propose(const Problem& problem, const Dataset& data,
                             const std::vector<char>&, Rng& rng) {
    if (problem.is_pool()) {
        throw std::invalid_argument("ns-ea: pool problems are unsupported (evolutionary "
                                    "mutation needs a continuous box)");
    }
    if (population_.empty()) throw std::invalid_argument("ns-ea: needs seed observations");
    (void)data;

    int parent = 0;
    double parent_novelty = -1.0;
    for (std::size_t i = 0; i < population_.size(); ++i) {
        const double nov = knn_mean_distance(population_[i].second, archive_, config_.novelty_k,
                                             DistanceMetric::Euclidean);
        if (nov > parent_novelty) {
            parent_novelty = nov;
            parent = static_cast<int>(i);
        }
    }

    const Box& box = problem.continuous().bounds();
    Eigen::VectorXd child = population_[parent].first;
    for (int i = 0; i < child.size(); ++i) {
        child[i] += config_.mutation_scale * box.width(i) * rng.normal();
    }
    Proposal proposal;
    proposal.x = box.clamp(child);
    return proposal;
}

RunTrace run_replicate(SearchAlgorithm& algorithm, const Problem& problem,
                       const BehaviorSpace& space, const RunConfig& config) {
    if (config.T < 1 || config.n_init < 1) {
        throw std::invalid_argument("run_replicate: T and n_init must be >= 1");
    }
    const auto start_time = std::chrono::steady_clock::now();

    RunTrace trace;
    trace.algorithm = algorithm.name();
    trace.problem = problem.name();
    trace.seed = config.seed;
    trace.n_init = config.n_init;
    trace.T = config.T;
    trace.input_dim = problem.input_dim();
    trace.outcome_dim = problem.outcome_dim();
    trace.bins_per_dim = space.bins_per_dim();
    trace.space_lower = space.box().lower;
    trace.space_upper = space.box().upper;

    Rng rng(mix_seed(config.seed, 0x7265706cULL));
    Dataset data;
    std::vector<char> evaluated(problem.is_pool() ? problem.pool().size() : 0, 0);
    BinSet seen;

    const auto record = [&](int iteration, const Eigen::VectorXd& x, int pool_index,
                            const QueryResult& q, std::int64_t predicted_bin, bool fallback) {
        TraceRow row;
        row.iteration = iteration;
        row.input = x;
        row.noisy_outcome = q.noisy;
        row.noiseless_outcome = q.noiseless;
        row.bin = space.project(q.noiseless).index;
        row.bin_noisy = space.project(q.noisy).index;
        row.pool_index = pool_index;
        row.predicted_bin = predicted_bin;
        row.constraint_fallback = fallback;
        seen.insert(BinId{row.bin});
        row.distinct_bins = static_cast<std::int64_t>(seen.size());
        row.reachability = static_cast<double>(row.distinct_bins) /
                           static_cast<double>(space.total_bins());
        trace.rows.push_back(std::move(row));
    };

    try {
        for (int i = 0; i < config.n_init; ++i) {
            Eigen::VectorXd x;
            int pool_index = -1;
            QueryResult q;
            if (problem.is_pool()) {
                pool_index = uniform_unevaluated(evaluated, rng);
                evaluated[pool_index] = 1;
                x = problem.pool().candidate(pool_index);
                q = problem.pool().query(pool_index, rng);
            } else {
                const Box& box = problem.continuous().bounds();
                x = rng.uniform_vector(box.lower, box.upper);
                q = problem.continuous().query(x, rng);
            }
            data.add(x, q.noisy);
            algorithm.observe(x, pool_index, q.noisy);
            record(i + 1, x, pool_index, q, -1, false);
        }

        for (int t = 0; t < config.T; ++t) {
            const Proposal proposal = algorithm.propose(problem, data, evaluated, rng);
            QueryResult q;
            int pool_index = -1;
            if (problem.is_pool()) {
                pool_index = proposal.pool_index;
                if (pool_index < 0 || pool_index >= problem.pool().size()) {
                    throw std::runtime_error("algorithm returned an invalid pool index");
                }
                if (evaluated[pool_index]) {
                    throw std::runtime_error("algorithm re-selected an evaluated candidate");
                }
                evaluated[pool_index] = 1;
                q = problem.pool().query(pool_index, rng);
            } else {
                q = problem.continuous().query(proposal.x, rng);
            }
            data.add(proposal.x, q.noisy);
            algorithm.observe(proposal.x, pool_index, q.noisy);
            record(config.n_init + t + 1, proposal.x, pool_index, q, proposal.predicted_bin,
                   proposal.constraint_fallback);
        }
    } catch (const std::exception& e) {
        trace.error = e.what();
    }

    trace.hyper_history = algorithm.hyper_history();
    trace.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
    return trace;
}

}  // namespace beacon
