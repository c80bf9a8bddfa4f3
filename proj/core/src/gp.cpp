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

#include "beacon/gp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "beacon/optimize.hpp"
#include "beacon/random.hpp"

namespace beacon {

namespace {

constexpr double kSqrt5 = 2.2360679774997896964091736687747;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;

void check_kernel_against_data(const Dataset& data, const KernelSpec& kernel) {
    kernel.validate();
    if (data.empty()) throw std::invalid_argument("gp: dataset is empty");
    if (kernel.outcome_dim() != data.outcome_dim()) {
        throw std::invalid_argument("gp: task_coupling dim != outcome dim");
    }
    if (kernel.family != KernelFamily::Tanimoto &&
        kernel.lengthscales.size() != data.input_dim()) {
        throw std::invalid_argument("gp: lengthscales dim != input dim");
    }
}

// Input kernel matrix (no signal variance) plus the scaled-distance matrix
// needed for Matern gradients.
struct InputGram {
    Eigen::MatrixXd kx;
    Eigen::MatrixXd r;  // only filled for Matern-5/2
};

InputGram input_gram(const KernelSpec& spec, const std::vector<Eigen::VectorXd>& inputs) {
    const int N = static_cast<int>(inputs.size());
    InputGram g;
    g.kx.resize(N, N);
    if (spec.family == KernelFamily::Matern52Ard) g.r.resize(N, N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j <= i; ++j) {
            double v;
            if (spec.family == KernelFamily::Matern52Ard) {
                const double r = (inputs[i] - inputs[j]).cwiseQuotient(spec.lengthscales).norm();
                v = (1.0 + kSqrt5 * r + (5.0 / 3.0) * r * r) * std::exp(-kSqrt5 * r);
                g.r(i, j) = g.r(j, i) = r;
            } else {
                v = input_kernel(spec, inputs[i], inputs[j]);
            }
            g.kx(i, j) = g.kx(j, i) = v;
        }
    }
    return g;
}

// Extended Gram, output-major blocks: block (j, j') = sv * B(j,j') * kx.
Eigen::MatrixXd extended_gram(const KernelSpec& spec, const Eigen::MatrixXd& kx) {
    const int N = static_cast<int>(kx.rows());
    const int n = spec.outcome_dim();
    Eigen::MatrixXd K(static_cast<Eigen::Index>(N) * n, static_cast<Eigen::Index>(N) * n);
    for (int j = 0; j < n; ++j) {
        for (int jp = 0; jp < n; ++jp) {
            K.block(static_cast<Eigen::Index>(j) * N, static_cast<Eigen::Index>(jp) * N, N, N) =
                (spec.signal_variance * spec.task_coupling(j, jp)) * kx;
        }
    }
    return K;
}

struct CholeskyOutcome {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;
};

// Factorizes K + noise*I, escalating jitter from 1e-8 by factors of 10 up to
// 1e-4 when the plain factorization fails.
CholeskyOutcome factorize_with_jitter(const Eigen::MatrixXd& gram, double noise,
                                      const char* context) {
    const Eigen::Index M = gram.rows();
    const Eigen::MatrixXd noisy =
        gram + noise * Eigen::MatrixXd::Identity(M, M);
    CholeskyOutcome out;
    out.llt.compute(noisy);
    if (out.llt.info() == Eigen::Success) return out;
    for (double jitter = 1e-8; jitter <= 1e-4 * (1.0 + 1e-12); jitter *= 10.0) {
        out.llt.compute(noisy + jitter * Eigen::MatrixXd::Identity(M, M));
        if (out.llt.info() == Eigen::Success) {
            out.jitter = jitter;
            return out;
        }
    }
    throw std::runtime_error(std::string(context) +
                             ": Gram matrix is not positive definite even with jitter 1e-4; "
                             "the kernel/data combination is badly conditioned "
                             "(near-duplicate inputs with tiny noise variance?)");
}

double lml_from_factor(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::VectorXd& centered,
                       const Eigen::VectorXd& alpha) {
    const Eigen::Index M = centered.size();
    double log_det_half = 0.0;
    const auto& L = llt.matrixLLT();
    for (Eigen::Index i = 0; i < M; ++i) log_det_half += std::log(L(i, i));
    return -0.5 * centered.dot(alpha) - log_det_half - 0.5 * static_cast<double>(M) * kLog2Pi;
}

}  // namespace

FittedGP fit_posterior(const Dataset& data, const KernelSpec& kernel) {
    check_kernel_against_data(data, kernel);
    const InputGram gram = input_gram(kernel, data.inputs());
    const Eigen::MatrixXd K = extended_gram(kernel, gram.kx);
    const CholeskyOutcome chol = factorize_with_jitter(K, kernel.noise_variance, "fit_posterior");

    FittedGP gp;
    gp.kernel = kernel;
    gp.train_inputs = data.inputs();
    gp.prior_mean = data.outcome_mean();
    gp.factor = chol.llt.matrixL();
    gp.dual = chol.llt.solve(data.stacked_centered(gp.prior_mean));
    gp.jitter = chol.jitter;
    return gp;
}

Eigen::VectorXd posterior_mean(const FittedGP& gp, const Eigen::VectorXd& x) {
    if (!x.allFinite()) throw std::invalid_argument("posterior_mean: non-finite input");
    const int N = gp.size();
    const int n = gp.outcome_dim();
    Eigen::VectorXd kxv(N);
    for (int i = 0; i < N; ++i) kxv[i] = input_kernel(gp.kernel, x, gp.train_inputs[i]);
    Eigen::VectorXd dots(n);
    for (int jp = 0; jp < n; ++jp) dots[jp] = kxv.dot(gp.dual.segment(static_cast<Eigen::Index>(jp) * N, N));
    Eigen::VectorXd mean(n);
    for (int j = 0; j < n; ++j) {
        mean[j] = gp.prior_mean[j] +
                  gp.kernel.signal_variance * gp.kernel.task_coupling.row(j).dot(dots);
    }
    return mean;
}

Eigen::VectorXd posterior_variance(const FittedGP& gp, const Eigen::VectorXd& x) {
    if (!x.allFinite()) throw std::invalid_argument("posterior_variance: non-finite input");
    const int N = gp.size();
    const int n = gp.outcome_dim();
    Eigen::VectorXd kxv(N);
    for (int i = 0; i < N; ++i) kxv[i] = input_kernel(gp.kernel, x, gp.train_inputs[i]);

    // Cross-covariance columns for each output, solved against the factor.
    Eigen::MatrixXd cross(static_cast<Eigen::Index>(N) * n, n);
    for (int j = 0; j < n; ++j) {
        for (int jp = 0; jp < n; ++jp) {
            cross.block(static_cast<Eigen::Index>(jp) * N, j, N, 1) =
                (gp.kernel.signal_variance * gp.kernel.task_coupling(jp, j)) * kxv;
        }
    }
    const Eigen::MatrixXd v = gp.factor.triangularView<Eigen::Lower>().solve(cross);

    const double prior_self = gp.kernel.signal_variance *
                              input_kernel(gp.kernel, x, x);
    Eigen::VectorXd var(n);
    for (int j = 0; j < n; ++j) {
        var[j] = std::max(prior_self * gp.kernel.task_coupling(j, j) - v.col(j).squaredNorm(),
                          kVarianceFloor);
    }
    return var;
}

Eigen::MatrixXd cross_covariance(const FittedGP& gp, const std::vector<Eigen::VectorXd>& points) {
    const int N = gp.size();
    const int n = gp.outcome_dim();
    const int C = static_cast<int>(points.size());
    Eigen::MatrixXd kx_cross(N, C);
    for (int i = 0; i < N; ++i) {
        for (int c = 0; c < C; ++c) {
            kx_cross(i, c) = input_kernel(gp.kernel, gp.train_inputs[i], points[c]);
        }
    }
    Eigen::MatrixXd cross(static_cast<Eigen::Index>(N) * n, static_cast<Eigen::Index>(C) * n);
    for (int jp = 0; jp < n; ++jp) {
        for (int j = 0; j < n; ++j) {
            cross.block(static_cast<Eigen::Index>(jp) * N, static_cast<Eigen::Index>(j) * C, N, C) =
                (gp.kernel.signal_variance * gp.kernel.task_coupling(jp, j)) * kx_cross;
        }
    }
    return cross;
}

Eigen::MatrixXd prior_covariance(const KernelSpec& kernel, const std::vector<Eigen::VectorXd>& points) {
    const int n = kernel.outcome_dim();
    const int C = static_cast<int>(points.size());
    Eigen::MatrixXd kx(C, C);
    for (int a = 0; a < C; ++a) {
        for (int b = 0; b <= a; ++b) {
            kx(a, b) = kx(b, a) = input_kernel(kernel, points[a], points[b]);
        }
    }
    Eigen::MatrixXd K(static_cast<Eigen::Index>(C) * n, static_cast<Eigen::Index>(C) * n);
    for (int j = 0; j < n; ++j) {
        for (int jp = 0; jp < n; ++jp) {
            K.block(static_cast<Eigen::Index>(j) * C, static_cast<Eigen::Index>(jp) * C, C, C) =
                (kernel.signal_variance * kernel.task_coupling(j, jp)) * kx;
        }
    }
    return K;
}

double log_marginal_likelihood(const Dataset& data, const KernelSpec& kernel) {
    check_kernel_against_data(data, kernel);
    const InputGram gram = input_gram(kernel, data.inputs());
    const Eigen::MatrixXd K = extended_gram(kernel, gram.kx);
    const CholeskyOutcome chol = factorize_with_jitter(K, kernel.noise_variance,
                                                       "log_marginal_likelihood");
    const Eigen::VectorXd centered = data.stacked_centered(data.outcome_mean());
    const Eigen::VectorXd alpha = chol.llt.solve(centered);
    return lml_from_factor(chol.llt, centered, alpha);
}

int PackedKernel::num_params() const {
    int p = (family == KernelFamily::Tanimoto ? 0 : input_dim) + 2;
    if (outcome_dim > 1 && !identity_coupling) p += outcome_dim;
    return p;
}

KernelSpec PackedKernel::to_spec() const {
    if (theta.size() != num_params()) {
        throw std::invalid_argument("PackedKernel: theta size != num_params");
    }
    KernelSpec spec;
    spec.family = family;
    int off = 0;
    if (family != KernelFamily::Tanimoto) {
        spec.lengthscales = theta.segment(0, input_dim).array().exp();
        off = input_dim;
    }
    spec.signal_variance = std::exp(theta[off]);
    spec.noise_variance = std::exp(theta[off + 1]);
    if (outcome_dim > 1 && !identity_coupling) {
        const Eigen::VectorXd c = theta.segment(off + 2, outcome_dim).array().tanh();
        spec.task_coupling = c * c.transpose();
        spec.task_coupling.diagonal().setOnes();
    } else {
        spec.task_coupling = Eigen::MatrixXd::Identity(outcome_dim, outcome_dim);
    }
    return spec;
}

PackedKernel PackedKernel::from_spec(const KernelSpec& spec, bool identity_coupling,
                                     const Eigen::VectorXd& coupling_theta) {
    PackedKernel packed;
    packed.family = spec.family;
    packed.input_dim = spec.family == KernelFamily::Tanimoto
                           ? 0
                           : static_cast<int>(spec.lengthscales.size());
    packed.outcome_dim = spec.outcome_dim();
    packed.identity_coupling = identity_coupling;
    packed.theta.resize(packed.num_params());
    int off = 0;
    if (spec.family != KernelFamily::Tanimoto) {
        packed.theta.segment(0, packed.input_dim) = spec.lengthscales.array().log();
        off = packed.input_dim;
    }
    packed.theta[off] = std::log(spec.signal_variance);
    packed.theta[off + 1] = std::log(std::max(spec.noise_variance, 1e-300));
    if (packed.outcome_dim > 1 && !identity_coupling) {
        if (coupling_theta.size() == packed.outcome_dim) {
            packed.theta.segment(off + 2, packed.outcome_dim) = coupling_theta;
        } else {
            packed.theta.segment(off + 2, packed.outcome_dim).setZero();
        }
    }
    return packed;
}

double packed_log_marginal_likelihood(const Dataset& data, const PackedKernel& packed,
                                      Eigen::VectorXd* grad) {
    const KernelSpec spec = packed.to_spec();
    check_kernel_against_data(data, spec);
    const int N = data.size();
    const int n = spec.outcome_dim();
    const int d = data.input_dim();
    const Eigen::Index M = static_cast<Eigen::Index>(N) * n;
    const auto& inputs = data.inputs();

    const InputGram gram = input_gram(spec, inputs);
    const Eigen::MatrixXd K = extended_gram(spec, gram.kx);
    const CholeskyOutcome chol = factorize_with_jitter(K, spec.noise_variance,
                                                       "log_marginal_likelihood");
    const Eigen::VectorXd centered = data.stacked_centered(data.outcome_mean());
    const Eigen::VectorXd alpha = chol.llt.solve(centered);
    const double lml = lml_from_factor(chol.llt, centered, alpha);
    if (grad == nullptr) return lml;

    // dLML/dtheta = 0.5 tr((alpha alpha^T - K^-1) dK/dtheta), evaluated block
    // by block against the output-major structure.
    const Eigen::MatrixXd kinv = chol.llt.solve(Eigen::MatrixXd::Identity(M, M));
    // G = alpha alpha^T - K^-1, accessed through its (j, j') blocks below.
    const Eigen::MatrixXd G = alpha * alpha.transpose() - kinv;

    // Coupling-weighted sum of blocks: S = sum_{j,j'} sv*B(j,j') G_{j,j'},
    // and T(j,j') = <G_{j,j'}, kx> for the coupling parameters.
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N, N);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        for (int jp = 0; jp < n; ++jp) {
            const auto block = G.block(static_cast<Eigen::Index>(j) * N,
                                       static_cast<Eigen::Index>(jp) * N, N, N);
            S += (spec.signal_variance * spec.task_coupling(j, jp)) * block;
            T(j, jp) = block.cwiseProduct(gram.kx).sum();
        }
    }

    grad->resize(packed.num_params());
    int off = 0;
    if (spec.family != KernelFamily::Tanimoto) {
        // d kx / d log ls_k, shared factor per pair.
        Eigen::MatrixXd shape(N, N);
        if (spec.family == KernelFamily::Matern52Ard) {
            shape = (5.0 / 3.0) * (1.0 + kSqrt5 * gram.r.array()) *
                    (-kSqrt5 * gram.r.array()).exp();
        } else {
            shape = gram.kx;
        }
        for (int k = 0; k < d; ++k) {
            double acc = 0.0;
            const double inv_ls = 1.0 / spec.lengthscales[k];
            for (int i = 0; i < N; ++i) {
                for (int ip = 0; ip < N; ++ip) {
                    const double dk = (inputs[i][k] - inputs[ip][k]) * inv_ls;
                    acc += S(i, ip) * shape(i, ip) * dk * dk;
                }
            }
            (*grad)[k] = 0.5 * acc;
        }
        off = d;
    }
    // d K / d log sv = K_signal.
    (*grad)[off] = 0.5 * S.cwiseProduct(gram.kx).sum();
    // d K / d log noise = noise * I.
    (*grad)[off + 1] = 0.5 * spec.noise_variance * G.trace();
    if (n > 1 && !packed.identity_coupling) {
        const Eigen::VectorXd c = packed.theta.segment(off + 2, n).array().tanh();
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    if (a == b) continue;  // diagonal pinned to 1
                    const double db = (a == j ? c[b] : 0.0) + (b == j ? c[a] : 0.0);
                    if (db != 0.0) acc += db * T(a, b);
                }
            }
            const double dc_dtheta = 1.0 - c[j] * c[j];
            (*grad)[off + 2 + j] = 0.5 * spec.signal_variance * acc * dc_dtheta;
        }
    }
    return lml;
}

KernelSpec heuristic_kernel(const Dataset& data, KernelFamily family, double noise_floor) {
    const int d = data.input_dim();
    const int n = data.outcome_dim();
    const int N = data.size();
    KernelSpec spec;
    spec.family = family;
    if (family != KernelFamily::Tanimoto) {
        spec.lengthscales.resize(d);
        for (int k = 0; k < d; ++k) {
            double mean = 0.0, sq = 0.0;
            for (const auto& x : data.inputs()) {
                mean += x[k];
                sq += x[k] * x[k];
            }
            mean /= N;
            const double var = std::max(sq / N - mean * mean, 0.0);
            const double sd = std::sqrt(var);
            spec.lengthscales[k] = sd > 1e-12 ? sd : 1.0;
        }
    }
    const Eigen::VectorXd ymean = data.outcome_mean();
    double pooled = 0.0;
    for (const auto& y : data.outcomes()) pooled += (y - ymean).squaredNorm();
    pooled /= std::max(N * n, 1);
    spec.signal_variance = pooled > 1e-12 ? pooled : 1.0;  // unit scale when outcomes carry none
    spec.noise_variance = std::max(1e-2 * spec.signal_variance, noise_floor);
    spec.task_coupling = Eigen::MatrixXd::Identity(n, n);
    return spec;
}

HyperFitResult fit_hyperparameters(const Dataset& data, KernelFamily family, int restarts,
                                   std::uint64_t seed, const HyperFitOptions& options_in) {
    HyperFitOptions options = options_in;
    options.restarts = restarts;
    if (data.size() < 2) {
        throw std::invalid_argument("fit_hyperparameters: need at least 2 observations");
    }
    if (restarts < 1) throw std::invalid_argument("fit_hyperparameters: restarts must be >= 1");

    const KernelSpec heuristic = heuristic_kernel(data, family, options.noise_floor);

    // Degenerate data: all inputs identical.
    bool degenerate = true;
    for (const auto& x : data.inputs()) {
        if ((x - data.inputs()[0]).lpNorm<Eigen::Infinity>() > 1e-12) {
            degenerate = false;
            break;
        }
    }

    HyperFitResult result;
    result.spec = heuristic;
    result.packed = PackedKernel::from_spec(heuristic, options.identity_coupling);
    result.degenerate = degenerate;
    try {
        result.log_marginal = log_marginal_likelihood(data, heuristic);
    } catch (const std::runtime_error&) {
        result.log_marginal = -std::numeric_limits<double>::infinity();
    }
    if (degenerate) return result;

    PackedKernel packed = result.packed;
    const int P = packed.num_params();

    // Bounds in theta space. Noise respects the configured floor.
    Eigen::VectorXd lower(P), upper(P);
    int off = 0;
    if (family != KernelFamily::Tanimoto) {
        off = data.input_dim();
        lower.segment(0, off).setConstant(std::log(1e-4));
        upper.segment(0, off).setConstant(std::log(1e6));
    }
    lower[off] = std::log(1e-10);
    upper[off] = std::log(1e10);
    lower[off + 1] = std::log(options.noise_floor);
    upper[off + 1] = std::log(1e10);
    for (int p = off + 2; p < P; ++p) {
        lower[p] = -5.0;
        upper[p] = 5.0;
    }

    // Weak Gaussian priors in log space, centered at the heuristic. Two
    // failure modes of plain maximum likelihood get regularized away: the
    // white-noise ridge (tiny lengthscales make signal indistinguishable from
    // noise, so the lengthscale prior breaks the tie toward the noise
    // explanation) and noise collapse (near-zero noise forces interpolation
    // of incompatible data and fills the posterior with phantom structure).
    // Signal variance stays unpenalized; data-supported moves of a few
    // e-folds cost well under a nat.
    const Eigen::VectorXd theta0 = result.packed.theta;
    Eigen::VectorXd prior_weight = Eigen::VectorXd::Zero(P);  // 1/sd^2 per parameter
    for (int p = 0; p < off; ++p) prior_weight[p] = 1.0;      // lengthscales, sd = 1
    prior_weight[off + 1] = 1.0 / (2.0 * 2.0);                // noise, sd = 2
    for (int p = off + 2; p < P; ++p) prior_weight[p] = 1.0 / (1.5 * 1.5);  // coupling
    const auto log_prior = [&](const Eigen::VectorXd& theta) {
        return -0.5 * (theta - theta0).cwiseAbs2().dot(prior_weight);
    };

    const ObjectiveFn objective = [&](const Eigen::VectorXd& theta, Eigen::VectorXd* grad) {
        PackedKernel candidate = packed;
        candidate.theta = theta;
        try {
            const double lml = packed_log_marginal_likelihood(data, candidate,
                                                              grad ? grad : nullptr);
            if (grad) {
                *grad = -(*grad - (theta - theta0).cwiseProduct(prior_weight));
            }
            return -(lml + log_prior(theta));
        } catch (const std::runtime_error&) {
            if (grad) grad->setZero(theta.size());
            return std::numeric_limits<double>::infinity();
        }
    };

    OptimizeOptions opt;
    opt.max_iterations = options.max_iterations;
    opt.grad_tolerance = 1e-5;

    // The prior steers the ascents; the final selection among the candidates
    // (heuristic plus every restart's optimum) goes by the true marginal
    // likelihood, so more restarts can only raise the attained value.
    Rng rng(mix_seed(seed, 0x68796665));
    Eigen::VectorXd best_theta = packed.theta;
    bool improved = false;
    for (int r = 0; r < restarts; ++r) {
        Eigen::VectorXd start;
        if (r == 0) {
            start = result.packed.theta;
        } else if (r == 1 && options.warm_start != nullptr &&
                   options.warm_start->theta.size() == P) {
            start = options.warm_start->theta;
        } else {
            start = result.packed.theta;
            for (int p = 0; p < P; ++p) {
                start[p] += (p < off + 2 ? 0.7 : 0.5) * rng.normal();
            }
        }
        start = start.cwiseMax(lower).cwiseMin(upper);
        OptimizeResult res;
        try {
            res = minimize_lbfgs(objective, start, lower, upper, opt);
        } catch (const std::invalid_argument&) {
            continue;  // start point itself infeasible
        }
        PackedKernel candidate = packed;
        candidate.theta = res.x;
        double lml;
        try {
            lml = packed_log_marginal_likelihood(data, candidate);
        } catch (const std::runtime_error&) {
            continue;
        }
        if (std::isfinite(lml) && lml > result.log_marginal) {
            result.log_marginal = lml;
            best_theta = res.x;
            improved = true;
        }
    }
    if (improved) {
        packed.theta = best_theta;
        result.packed = packed;
        result.spec = packed.to_spec();
    }
    return result;
}

}  // namespace beacon
