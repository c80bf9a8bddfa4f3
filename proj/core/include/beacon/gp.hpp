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

#ifndef BEACON_GP_HPP
#define BEACON_GP_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "beacon/dataset.hpp"
#include "beacon/kernel.hpp"

namespace beacon {

// Multi-output GP posterior over the extended space of (input, output-index)
// pairs. The Gram matrix is ordered output-major: extended index j*N + i holds
// training input i for output j. `factor` is the lower-triangular Cholesky
// factor of K + noise_variance*I (plus any jitter recorded in `jitter`), and
// `dual` solves that system against the centered stacked targets.
struct FittedGP {
    KernelSpec kernel;
    std::vector<Eigen::VectorXd> train_inputs;
    Eigen::MatrixXd factor;
    Eigen::VectorXd dual;
    Eigen::VectorXd prior_mean;  // constant per output (empirical outcome mean)
    double jitter = 0.0;

    int size() const { return static_cast<int>(train_inputs.size()); }
    int outcome_dim() const { return static_cast<int>(prior_mean.size()); }
};

// Variance floor applied before any posterior variance is consumed.
inline constexpr double kVarianceFloor = 1e-12;

// Conditions the GP on the data. Escalating jitter (1e-8 up to 1e-4) is added
// if the factorization fails; a failure at max jitter throws std::runtime_error
// naming the conditioning problem.
FittedGP fit_posterior(const Dataset& data, const KernelSpec& kernel);

// Posterior mean, one entry per output.
Eigen::VectorXd posterior_mean(const FittedGP& gp, const Eigen::VectorXd& x);

// Per-output posterior variance, clamped at kVarianceFloor.
Eigen::VectorXd posterior_variance(const FittedGP& gp, const Eigen::VectorXd& x);

// Cross-covariance between the extended training set and a list of test
// points, both output-major. Shape (N*n) x (C*n). Internal building block for
// pathwise and joint sampling.
Eigen::MatrixXd cross_covariance(const FittedGP& gp, const std::vector<Eigen::VectorXd>& points);

// Prior covariance over the extended test points, output-major, (C*n)^2.
Eigen::MatrixXd prior_covariance(const KernelSpec& kernel, const std::vector<Eigen::VectorXd>& points);

// Exact Gaussian log marginal likelihood of the stacked targets, with the
// per-output empirical mean as the constant prior mean.
double log_marginal_likelihood(const Dataset& data, const KernelSpec& kernel);

// Fitting parametrization: everything lives in log space except the task
// coupling, which is rank-1 plus diagonal with unit diagonal,
//   B = c c^T + diag(1 - c^2),  c = tanh(theta_c),
// the cheapest coupling that spans independent (c = 0) through strongly
// correlated outputs. Layout of theta:
//   [log lengthscales (d, ARD families only) | log sv | log noise | theta_c (n entries, n > 1 only)]
struct PackedKernel {
    KernelFamily family = KernelFamily::Matern52Ard;
    int input_dim = 0;
    int outcome_dim = 1;
    bool identity_coupling = false;  // freeze B = I and drop theta_c
    Eigen::VectorXd theta;

    int num_params() const;
    KernelSpec to_spec() const;
    static PackedKernel from_spec(const KernelSpec& spec, bool identity_coupling,
                                  const Eigen::VectorXd& coupling_theta = {});
};

// Log marginal likelihood in the packed parametrization, with analytic
// gradient when grad != nullptr.
double packed_log_marginal_likelihood(const Dataset& data, const PackedKernel& packed,
                                      Eigen::VectorXd* grad = nullptr);

struct HyperFitOptions {
    int restarts = 2;
    double noise_floor = 1e-6;         // lower bound on learned noise variance
    bool identity_coupling = false;
    int max_iterations = 80;
    const PackedKernel* warm_start = nullptr;  // extra start, e.g. previous iteration's fit
};

struct HyperFitResult {
    KernelSpec spec;
    PackedKernel packed;      // same hyperparameters in fitting parametrization
    double log_marginal = 0.0;
    bool degenerate = false;  // all inputs identical; heuristic returned as-is
};

// Initialization heuristic: lengthscales = per-dimension input standard
// deviation, signal variance = pooled outcome variance, noise = 1e-2 of that.
KernelSpec heuristic_kernel(const Dataset& data, KernelFamily family, double noise_floor = 1e-6);

// Multi-start gradient ascent on the log marginal likelihood in log-parameter
// space. The result is never worse (in log marginal likelihood) than the
// initialization heuristic.
HyperFitResult fit_hyperparameters(const Dataset& data, KernelFamily family, int restarts,
                                   std::uint64_t seed, const HyperFitOptions& options = {});

}  // namespace beacon

#endif  // BEACON_GP_HPP
