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

#include "beacon/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace beacon {

Eigen::VectorXd FeatureMap::features(const Eigen::VectorXd& x) const {
    return (scale * ((frequencies * x + phases).array().cos())).matrix();
}

Eigen::MatrixXd FeatureMap::feature_jacobian(const Eigen::VectorXd& x) const {
    const Eigen::ArrayXd s = (frequencies * x + phases).array().sin();
    return (-scale * s).matrix().asDiagonal() * frequencies;
}

FeatureMap make_feature_map(const KernelSpec& spec, int num_features, Rng& rng) {
    if (spec.family == KernelFamily::Tanimoto) {
        throw std::invalid_argument(
            "make_feature_map: tanimoto kernel has no spectral representation; "
            "use exact_joint_sample for discrete pools");
    }
    if (num_features < 1) throw std::invalid_argument("make_feature_map: need num_features >= 1");
    const int d = static_cast<int>(spec.lengthscales.size());
    FeatureMap map;
    map.frequencies.resize(num_features, d);
    map.phases.resize(num_features);
    for (int i = 0; i < num_features; ++i) {
        if (spec.family == KernelFamily::SquaredExponentialArd) {
            for (int k = 0; k < d; ++k) {
                map.frequencies(i, k) = rng.normal() / spec.lengthscales[k];
            }
        } else {
            // Matern-5/2 spectral measure: multivariate t with 5 dof, one
            // chi-squared mixing variable per frequency row.
            const double u = rng.chi_squared(5);
            const double mix = std::sqrt(5.0 / u);
            for (int k = 0; k < d; ++k) {
                map.frequencies(i, k) = mix * rng.normal() / spec.lengthscales[k];
            }
        }
        map.phases[i] = rng.uniform(0.0, 2.0 * M_PI);
    }
    map.scale = std::sqrt(2.0 * spec.signal_variance / num_features);
    return map;
}

PathSample::PathSample(std::shared_ptr<const FittedGP> gp, FeatureMap features,
                       Eigen::MatrixXd prior_weights, Eigen::MatrixXd output_mix,
                       Eigen::VectorXd correction)
    : gp_(std::move(gp)),
      features_(std::move(features)),
      prior_weights_(std::move(prior_weights)),
      output_mix_(std::move(output_mix)),
      correction_(std::move(correction)) {}

Eigen::VectorXd PathSample::value(const Eigen::VectorXd& x) const {
    if (!x.allFinite()) throw std::invalid_argument("PathSample::value: non-finite input");
    const FittedGP& gp = *gp_;
    const int N = gp.size();
    const int n = gp.outcome_dim();

    const Eigen::VectorXd phi = features_.features(x);
    const Eigen::VectorXd prior = output_mix_ * (prior_weights_.transpose() * phi);

    Eigen::VectorXd kxv(N);
    for (int i = 0; i < N; ++i) kxv[i] = input_kernel(gp.kernel, x, gp.train_inputs[i]);
    Eigen::VectorXd dots(n);
    for (int jp = 0; jp < n; ++jp) {
        dots[jp] = kxv.dot(correction_.segment(static_cast<Eigen::Index>(jp) * N, N));
    }

    Eigen::VectorXd out(n);
    for (int j = 0; j < n; ++j) {
        out[j] = gp.prior_mean[j] + prior[j] +
                 gp.kernel.signal_variance * gp.kernel.task_coupling.row(j).dot(dots);
    }
    return out;
}

Eigen::MatrixXd PathSample::jacobian(const Eigen::VectorXd& x) const {
    if (!x.allFinite()) throw std::invalid_argument("PathSample::jacobian: non-finite input");
    const FittedGP& gp = *gp_;
    const int N = gp.size();
    const int n = gp.outcome_dim();
    const int d = static_cast<int>(x.size());

    const Eigen::MatrixXd dphi = features_.feature_jacobian(x);         // m x d
    const Eigen::MatrixXd dprior = output_mix_ * (prior_weights_.transpose() * dphi);  // n x d

    Eigen::MatrixXd dk(N, d);  // rows: d input_kernel(x, x_i) / dx
    for (int i = 0; i < N; ++i) {
        dk.row(i) = input_kernel_gradient(gp.kernel, x, gp.train_inputs[i]).transpose();
    }
    Eigen::MatrixXd ddots(n, d);
    for (int jp = 0; jp < n; ++jp) {
        ddots.row(jp) =
            correction_.segment(static_cast<Eigen::Index>(jp) * N, N).transpose() * dk;
    }

    Eigen::MatrixXd jac(n, d);
    for (int j = 0; j < n; ++j) {
        jac.row(j) = dprior.row(j) +
                     gp.kernel.signal_variance * (gp.kernel.task_coupling.row(j) * ddots);
    }
    return jac;
}

PathSample draw_path(std::shared_ptr<const FittedGP> gp, int num_features, std::uint64_t seed) {
    if (!gp) throw std::invalid_argument("draw_path: null gp");
    const FittedGP& model = *gp;
    const int N = model.size();
    const int n = model.outcome_dim();
    Rng rng(mix_seed(seed, 0x70617468));

    FeatureMap features = make_feature_map(model.kernel, num_features, rng);

    Eigen::MatrixXd weights(num_features, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < num_features; ++i) weights(i, j) = rng.normal();
    }

    // Lower Cholesky factor of the task coupling mixes latent outputs so the
    // prior covariance across outputs matches the extended-space kernel.
    Eigen::MatrixXd mix;
    if (n == 1) {
        mix = Eigen::MatrixXd::Ones(1, 1);
    } else {
        Eigen::LLT<Eigen::MatrixXd> llt(model.kernel.task_coupling);
        if (llt.info() != Eigen::Success) {
            // Unit-diagonal PSD coupling can be borderline singular; nudge it.
            Eigen::MatrixXd b = model.kernel.task_coupling;
            b.diagonal().array() += 1e-10;
            llt.compute(b);
            if (llt.info() != Eigen::Success) {
                throw std::runtime_error("draw_path: task coupling is not PSD");
            }
        }
        mix = llt.matrixL();
    }

    // Prior sample and noise realization at the training set.
    Eigen::MatrixXd phi_train(N, num_features);
    for (int i = 0; i < N; ++i) phi_train.row(i) = features.features(model.train_inputs[i]).transpose();
    const Eigen::MatrixXd latent_train = phi_train * weights;          // N x n
    const Eigen::MatrixXd prior_train = latent_train * mix.transpose();  // N x n

    // The FittedGP stores only the solved dual; rebuild the centered targets
    // as factor * (factor^T * dual).
    const Eigen::VectorXd centered =
        model.factor.triangularView<Eigen::Lower>() *
        (model.factor.transpose().triangularView<Eigen::Upper>() * model.dual);

    const double noise_sd = std::sqrt(model.kernel.noise_variance);
    Eigen::VectorXd residual(static_cast<Eigen::Index>(N) * n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < N; ++i) {
            const double eps = noise_sd > 0.0 ? noise_sd * rng.normal() : 0.0;
            residual[static_cast<Eigen::Index>(j) * N + i] =
                centered[static_cast<Eigen::Index>(j) * N + i] - prior_train(i, j) - eps;
        }
    }

    Eigen::VectorXd correction = model.factor.triangularView<Eigen::Lower>().solve(residual);
    model.factor.transpose().triangularView<Eigen::Upper>().solveInPlace(correction);

    return PathSample(std::move(gp), std::move(features), std::move(weights), std::move(mix),
                      std::move(correction));
}

Eigen::MatrixXd exact_joint_sample(const FittedGP& gp,
                                   const std::vector<Eigen::VectorXd>& candidates,
                                   std::uint64_t seed) {
    if (candidates.empty()) throw std::invalid_argument("exact_joint_sample: no candidates");
    const int C = static_cast<int>(candidates.size());
    const int n = gp.outcome_dim();
    const Eigen::Index M = static_cast<Eigen::Index>(C) * n;

    // Posterior mean and covariance over the extended test points.
    const Eigen::MatrixXd cross = cross_covariance(gp, candidates);  // (N*n) x (C*n)
    const Eigen::MatrixXd v = gp.factor.triangularView<Eigen::Lower>().solve(cross);
    Eigen::MatrixXd cov = prior_covariance(gp.kernel, candidates) - v.transpose() * v;

    Eigen::VectorXd mean(M);
    for (int c = 0; c < C; ++c) {
        const Eigen::VectorXd mu = posterior_mean(gp, candidates[c]);
        for (int j = 0; j < n; ++j) mean[static_cast<Eigen::Index>(j) * C + c] = mu[j];
    }

    // Pivoted LDL^T tolerates the semi-definite case (duplicate candidates,
    // zero noise); tiny negative pivots from roundoff are clamped to zero.
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    if (ldlt.info() != Eigen::Success) {
        cov.diagonal().array() += 1e-10;
        ldlt.compute(cov);
        if (ldlt.info() != Eigen::Success) {
            throw std::runtime_error("exact_joint_sample: joint posterior covariance "
                                     "factorization failed");
        }
    }
    Eigen::VectorXd pivots = ldlt.vectorD();
    for (Eigen::Index i = 0; i < M; ++i) pivots[i] = std::sqrt(std::max(pivots[i], 0.0));

    Rng rng(mix_seed(seed, 0x6a6f696e74));
    const Eigen::VectorXd z = rng.normal_vector(static_cast<int>(M));
    // sample = mean + P^T L sqrt(D) z
    Eigen::VectorXd sample = pivots.asDiagonal() * z;
    sample = ldlt.matrixL() * sample;
    sample = ldlt.transpositionsP().transpose() * sample;
    sample += mean;

    Eigen::MatrixXd result(C, n);
    for (int c = 0; c < C; ++c) {
        for (int j = 0; j < n; ++j) result(c, j) = sample[static_cast<Eigen::Index>(j) * C + c];
    }
    return result;
}

}  // namespace beacon
