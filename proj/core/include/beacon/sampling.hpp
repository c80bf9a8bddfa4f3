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

#ifndef BEACON_SAMPLING_HPP
#define BEACON_SAMPLING_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "beacon/gp.hpp"
#include "beacon/random.hpp"

namespace beacon {

// Random cosine features for a stationary kernel: phi_i(x) = scale * cos(w_i.x + b_i)
// with w_i drawn from the kernel's spectral measure (Gaussian for the squared
// exponential, multivariate-t with 5 dof for Matern-5/2) and scale =
// sqrt(2 * signal_variance / m).
struct FeatureMap {
    Eigen::MatrixXd frequencies;  // m x d
    Eigen::VectorXd phases;       // m, in [0, 2pi)
    double scale = 0.0;

    int num_features() const { return static_cast<int>(frequencies.rows()); }
    Eigen::VectorXd features(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd feature_jacobian(const Eigen::VectorXd& x) const;  // m x d
};

FeatureMap make_feature_map(const KernelSpec& spec, int num_features, Rng& rng);

// Deterministic, evaluable, differentiable draw g ~ f | D via decoupled
// sampling: a weight-space prior sample from random features plus the
// function-space pathwise correction
//   g(x) = prior(x) + k(x, X) (K + noise I)^-1 (y_c - prior(X) - eps),
// eps ~ N(0, noise I). Multi-output draws share feature frequencies across
// latent outputs and mix through the Cholesky factor of the task coupling.
class PathSample {
public:
    PathSample(std::shared_ptr<const FittedGP> gp, FeatureMap features,
               Eigen::MatrixXd prior_weights, Eigen::MatrixXd output_mix,
               Eigen::VectorXd correction);

    // Sampled outcome at x, one entry per output. Deterministic: equal inputs
    // give bit-identical results.
    Eigen::VectorXd value(const Eigen::VectorXd& x) const;

    // Analytic Jacobian of value(), n x d. Throws for kernels without a
    // spectral representation.
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

    const FittedGP& gp() const { return *gp_; }
    const FeatureMap& feature_map() const { return features_; }
    const Eigen::MatrixXd& prior_weights() const { return prior_weights_; }
    const Eigen::MatrixXd& output_mix() const { return output_mix_; }
    const Eigen::VectorXd& correction() const { return correction_; }

private:
    std::shared_ptr<const FittedGP> gp_;
    FeatureMap features_;
    Eigen::MatrixXd prior_weights_;  // m x n, latent weights before mixing
    Eigen::MatrixXd output_mix_;     // n x n lower-triangular mix
    Eigen::VectorXd correction_;     // N*n pathwise-update dual coefficients
};

// Draws one posterior path. Throws std::invalid_argument for the tanimoto
// kernel (no spectral representation; use exact_joint_sample instead).
PathSample draw_path(std::shared_ptr<const FittedGP> gp, int num_features, std::uint64_t seed);

// One exact draw from the joint posterior over all candidates and outputs.
// Returns a C x n matrix of sampled outcomes. Semi-definite joint covariances
// (duplicate candidates, zero noise) are handled by a pivoted factorization
// with negative eigenvalue clamping.
Eigen::MatrixXd exact_joint_sample(const FittedGP& gp,
                                   const std::vector<Eigen::VectorXd>& candidates,
                                   std::uint64_t seed);

}  // namespace beacon

#endif  // BEACON_SAMPLING_HPP
