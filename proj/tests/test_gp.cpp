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

#include <doctest.h>

#include <cmath>

#include "beacon/gp.hpp"
#include "beacon/random.hpp"
#include "support/oracles.hpp"

using namespace beacon;

namespace {

KernelSpec random_spec(Rng& rng, int d, int n, KernelFamily family) {
    KernelSpec spec;
    spec.family = family;
    spec.lengthscales = Eigen::VectorXd::Ones(d);
    for (int i = 0; i < d; ++i) spec.lengthscales[i] = rng.uniform(0.5, 2.0);
    spec.signal_variance = rng.uniform(0.5, 3.0);
    spec.noise_variance = rng.uniform(0.01, 0.3);
    if (n == 1) {
        spec.task_coupling = Eigen::MatrixXd::Identity(1, 1);
    } else {
        Eigen::VectorXd c(n);
        for (int j = 0; j < n; ++j) c[j] = rng.uniform(-0.9, 0.9);
        spec.task_coupling = c * c.transpose();
        spec.task_coupling.diagonal().setOnes();
    }
    return spec;
}

Dataset make_random_data(Rng& rng, int N, int d, int n) {
    Dataset data;
    for (int i = 0; i < N; ++i) data.add(rng.normal_vector(d), rng.normal_vector(n));
    return data;
}

}  // namespace

TEST_CASE("single observation: posterior mean reproduces the target") {
    Dataset data;
    data.add(Eigen::VectorXd::Constant(1, 0.3), Eigen::VectorXd::Constant(1, 2.5));
    KernelSpec spec;
    spec.family = KernelFamily::SquaredExponentialArd;
    spec.lengthscales = Eigen::VectorXd::Ones(1);
    spec.signal_variance = 1.0;
    spec.noise_variance = 0.25;
    const FittedGP gp = fit_posterior(data, spec);
    // With the empirical prior mean the centered target is zero, so the mean
    // at the training input is exactly y (the shrinkage applies to zero).
    CHECK(posterior_mean(gp, data.inputs()[0])[0] == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("two far-apart observations follow the 1x1 shrinkage closed form") {
    Dataset data;
    data.add(Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 1.0));
    data.add(Eigen::VectorXd::Constant(1, 1000.0), Eigen::VectorXd::Constant(1, -1.0));
    KernelSpec spec;
    spec.family = KernelFamily::SquaredExponentialArd;
    spec.lengthscales = Eigen::VectorXd::Ones(1);
    spec.signal_variance = 2.0;
    spec.noise_variance = 0.5;
    const FittedGP gp = fit_posterior(data, spec);
    // prior mean 0; cross-covariance between the two points is numerically 0
    const double shrink = spec.signal_variance / (spec.signal_variance + spec.noise_variance);
    CHECK(posterior_mean(gp, data.inputs()[0])[0] == doctest::Approx(shrink * 1.0).epsilon(1e-10));
    CHECK(posterior_mean(gp, data.inputs()[1])[0] == doctest::Approx(shrink * -1.0).epsilon(1e-10));
}

TEST_CASE("posterior mean reverts to the prior mean far from data") {
    Rng rng(11);
    Dataset data = make_random_data(rng, 6, 2, 1);
    KernelSpec spec = random_spec(rng, 2, 1, KernelFamily::Matern52Ard);
    const FittedGP gp = fit_posterior(data, spec);
    const Eigen::VectorXd far = Eigen::VectorXd::Constant(2, 1e4);  // >> 10 lengthscales
    CHECK(std::abs(posterior_mean(gp, far)[0] - gp.prior_mean[0]) <
          1e-3 * spec.signal_variance);
    CHECK(posterior_variance(gp, far)[0] ==
          doctest::Approx(spec.signal_variance).epsilon(1e-3));
}

TEST_CASE("posterior variance at a training input is tiny with zero noise") {
    Dataset data;
    data.add(Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 1.0));
    data.add(Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd::Constant(1, -1.0));
    KernelSpec spec;
    spec.family = KernelFamily::SquaredExponentialArd;
    spec.lengthscales = Eigen::VectorXd::Ones(1);
    spec.signal_variance = 1.0;
    spec.noise_variance = 0.0;
    const FittedGP gp = fit_posterior(data, spec);
    CHECK(posterior_variance(gp, data.inputs()[0])[0] <= 1e-8);
    CHECK(posterior_variance(gp, data.inputs()[1])[0] <= 1e-8);
    CHECK(posterior_variance(gp, data.inputs()[0])[0] >= 0.0);
}

TEST_CASE("factorized posterior matches the dense-solve oracle") {
    Rng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 1 + static_cast<int>(rng.uniform_int(3));
        const int n = 1 + static_cast<int>(rng.uniform_int(3));
        const int N = 3 + static_cast<int>(rng.uniform_int(8));
        const KernelFamily family = trial % 2 == 0 ? KernelFamily::SquaredExponentialArd
                                                   : KernelFamily::Matern52Ard;
        const KernelSpec spec = random_spec(rng, d, n, family);
        const Dataset data = make_random_data(rng, N, d, n);
        const FittedGP gp = fit_posterior(data, spec);
        for (int t = 0; t < 10; ++t) {
            const Eigen::VectorXd x = rng.normal_vector(d);
            const auto oracle = oracle::dense_posterior(data, spec, x);
            const Eigen::VectorXd mean = posterior_mean(gp, x);
            const Eigen::VectorXd var = posterior_variance(gp, x);
            for (int j = 0; j < n; ++j) {
                CHECK(mean[j] == doctest::Approx(oracle.mean[j]).epsilon(1e-8));
                CHECK(var[j] == doctest::Approx(oracle.variance[j]).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("factor reconstructs the noisy Gram matrix") {
    Rng rng(5);
    const KernelSpec spec = random_spec(rng, 2, 2, KernelFamily::Matern52Ard);
    const Dataset data = make_random_data(rng, 7, 2, 2);
    const FittedGP gp = fit_posterior(data, spec);
    const int M = 14;
    Eigen::MatrixXd expected(M, M);
    for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 7; ++i) {
            for (int jp = 0; jp < 2; ++jp) {
                for (int ip = 0; ip < 7; ++ip) {
                    expected(j * 7 + i, jp * 7 + ip) = oracle::extended_kernel(
                        spec, data.inputs()[i], j, data.inputs()[ip], jp);
                }
            }
        }
    }
    expected.diagonal().array() += spec.noise_variance + gp.jitter;
    const Eigen::MatrixXd rebuilt = gp.factor * gp.factor.transpose();
    CHECK((rebuilt - expected).norm() / expected.norm() < 1e-8);
}

TEST_CASE("log marginal likelihood closed form for one standard observation") {
    Dataset data;
    data.add(Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 0.0));
    KernelSpec spec;
    spec.family = KernelFamily::SquaredExponentialArd;
    spec.lengthscales = Eigen::VectorXd::Ones(1);
    spec.signal_variance = 0.6;
    spec.noise_variance = 0.4;  // k(x,x) + noise = 1
    CHECK(log_marginal_likelihood(data, spec) ==
          doctest::Approx(-0.5 * std::log(2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("log marginal likelihood matches the dense oracle and scales with outcomes") {
    Rng rng(31337);
    const KernelSpec spec = random_spec(rng, 2, 2, KernelFamily::SquaredExponentialArd);
    Dataset data = make_random_data(rng, 6, 2, 2);
    const double base = log_marginal_likelihood(data, spec);
    CHECK(base == doctest::Approx(oracle::dense_log_marginal_likelihood(data, spec)).epsilon(1e-9));

    Dataset scaled;
    for (int i = 0; i < data.size(); ++i) scaled.add(data.inputs()[i], 3.0 * data.outcomes()[i]);
    const double scaled_lml = log_marginal_likelihood(scaled, spec);
    CHECK(scaled_lml !=
          doctest::Approx(base).epsilon(1e-6));  // scaling the outcomes changes the value
    CHECK(scaled_lml ==
          doctest::Approx(oracle::dense_log_marginal_likelihood(scaled, spec)).epsilon(1e-9));
}

TEST_CASE("log marginal likelihood is invariant to observation order") {
    Rng rng(8);
    const KernelSpec spec = random_spec(rng, 3, 1, KernelFamily::Matern52Ard);
    const Dataset data = make_random_data(rng, 8, 3, 1);
    Dataset reversed;
    for (int i = data.size() - 1; i >= 0; --i) reversed.add(data.inputs()[i], data.outcomes()[i]);
    CHECK(log_marginal_likelihood(data, spec) ==
          doctest::Approx(log_marginal_likelihood(reversed, spec)).epsilon(1e-10));
}

TEST_CASE("conditioning on one more observation never raises pointwise variance") {
    Rng rng(404);
    const KernelSpec spec = random_spec(rng, 2, 1, KernelFamily::SquaredExponentialArd);
    Dataset data = make_random_data(rng, 8, 2, 1);
    const FittedGP before = fit_posterior(data, spec);
    data.add(rng.normal_vector(2), rng.normal_vector(1));
    const FittedGP after = fit_posterior(data, spec);
    for (int t = 0; t < 20; ++t) {
        const Eigen::VectorXd x = rng.normal_vector(2);
        CHECK(posterior_variance(after, x)[0] <=
              posterior_variance(before, x)[0] + 1e-10);
    }
}

TEST_CASE("identity coupling factorizes into independent per-output fits") {
    Rng rng(606);
    KernelSpec spec = random_spec(rng, 2, 3, KernelFamily::Matern52Ard);
    spec.task_coupling = Eigen::MatrixXd::Identity(3, 3);
    const Dataset data = make_random_data(rng, 6, 2, 3);
    const FittedGP joint = fit_posterior(data, spec);

    KernelSpec single = spec;
    single.task_coupling = Eigen::MatrixXd::Identity(1, 1);
    for (int j = 0; j < 3; ++j) {
        Dataset slice;
        for (int i = 0; i < data.size(); ++i) {
            slice.add(data.inputs()[i], data.outcomes()[i].segment(j, 1));
        }
        const FittedGP separate = fit_posterior(slice, single);
        for (int t = 0; t < 5; ++t) {
            const Eigen::VectorXd x = rng.normal_vector(2);
            CHECK(posterior_mean(joint, x)[j] ==
                  doctest::Approx(posterior_mean(separate, x)[0]).epsilon(1e-10));
            CHECK(posterior_variance(joint, x)[j] ==
                  doctest::Approx(posterior_variance(separate, x)[0]).epsilon(1e-10));
        }
    }
    // With identity coupling, output j's mean ignores the other outcome columns.
    Dataset tweaked;
    for (int i = 0; i < data.size(); ++i) {
        Eigen::VectorXd y = data.outcomes()[i];
        y[1] += 5.0;
        y[2] -= 3.0;
        tweaked.add(data.inputs()[i], y);
    }
    const FittedGP joint2 = fit_posterior(tweaked, spec);
    const Eigen::VectorXd probe = rng.normal_vector(2);
    CHECK(posterior_mean(joint2, probe)[0] ==
          doctest::Approx(posterior_mean(joint, probe)[0]).epsilon(1e-10));
}

TEST_CASE("packed log marginal likelihood gradient matches central differences") {
    Rng rng(2718);
    for (int trial = 0; trial < 6; ++trial) {
        const int d = 1 + static_cast<int>(rng.uniform_int(3));
        const int n = 1 + static_cast<int>(rng.uniform_int(2));
        const KernelFamily family = trial % 2 == 0 ? KernelFamily::SquaredExponentialArd
                                                   : KernelFamily::Matern52Ard;
        const Dataset data = make_random_data(rng, 7, d, n);
        PackedKernel packed;
        packed.family = family;
        packed.input_dim = d;
        packed.outcome_dim = n;
        packed.theta = 0.3 * rng.normal_vector(packed.num_params());

        Eigen::VectorXd analytic;
        packed_log_marginal_likelihood(data, packed, &analytic);
        const Eigen::VectorXd numeric = oracle::finite_difference_gradient(
            [&](const Eigen::VectorXd& theta) {
                PackedKernel p = packed;
                p.theta = theta;
                return packed_log_marginal_likelihood(data, p);
            },
            packed.theta);
        for (int p = 0; p < analytic.size(); ++p) {
            CHECK(std::abs(analytic[p] - numeric[p]) <=
                  1e-4 * std::max(1.0, std::abs(numeric[p])));
        }
        // Packed and spec-level evaluations agree.
        CHECK(packed_log_marginal_likelihood(data, packed) ==
              doctest::Approx(log_marginal_likelihood(data, packed.to_spec())).epsilon(1e-10));
    }
}

TEST_CASE("tanimoto packed likelihood gradient matches central differences") {
    Rng rng(1618);
    Dataset data;
    for (int i = 0; i < 12; ++i) {
        Eigen::VectorXd x(8);
        for (int j = 0; j < 8; ++j) x[j] = rng.uniform() < 0.5 ? 0.0 : 1.0;
        data.add(x, rng.normal_vector(2));
    }
    PackedKernel packed;
    packed.family = KernelFamily::Tanimoto;
    packed.input_dim = 0;
    packed.outcome_dim = 2;
    packed.theta = 0.2 * rng.normal_vector(packed.num_params());  // sv, noise, 2 coupling

    Eigen::VectorXd analytic;
    packed_log_marginal_likelihood(data, packed, &analytic);
    const Eigen::VectorXd numeric = oracle::finite_difference_gradient(
        [&](const Eigen::VectorXd& theta) {
            PackedKernel p = packed;
            p.theta = theta;
            return packed_log_marginal_likelihood(data, p);
        },
        packed.theta);
    for (int p = 0; p < analytic.size(); ++p) {
        CHECK(std::abs(analytic[p] - numeric[p]) <= 1e-4 * std::max(1.0, std::abs(numeric[p])));
    }

    const HyperFitResult fit = fit_hyperparameters(data, KernelFamily::Tanimoto, 2, 5);
    CHECK(fit.spec.family == KernelFamily::Tanimoto);
    CHECK(fit.spec.lengthscales.size() == 0);
    CHECK(fit.log_marginal >=
          log_marginal_likelihood(data, heuristic_kernel(data, KernelFamily::Tanimoto)) - 1e-9);
}

TEST_CASE("hyperparameter fit drives noise down on noiseless smooth data") {
    Rng rng(123);
    Dataset data;
    for (int i = 0; i < 20; ++i) {
        const Eigen::VectorXd x = rng.normal_vector(2);
        Eigen::VectorXd y(1);
        y[0] = 1.5 * x[0] - 0.7 * x[1] + 0.2;
        data.add(x, y);
    }
    const HyperFitResult fit =
        fit_hyperparameters(data, KernelFamily::SquaredExponentialArd, 3, 99);
    CHECK(!fit.degenerate);
    CHECK(fit.spec.noise_variance < 1e-3 * fit.spec.signal_variance);
}

TEST_CASE("hyperparameter fit attributes pure noise to the noise term") {
    Rng rng(321);
    Dataset data;
    for (int i = 0; i < 40; ++i) data.add(rng.normal_vector(2), rng.normal_vector(1));
    const HyperFitResult fit = fit_hyperparameters(data, KernelFamily::Matern52Ard, 3, 7);
    const double ratio =
        fit.spec.noise_variance / (fit.spec.signal_variance + fit.spec.noise_variance);
    CHECK(ratio > 0.5);
}

TEST_CASE("more restarts never lower the attained log marginal likelihood") {
    Rng rng(55);
    const Dataset data = make_random_data(rng, 15, 2, 1);
    const HyperFitResult one = fit_hyperparameters(data, KernelFamily::Matern52Ard, 1, 42);
    const HyperFitResult five = fit_hyperparameters(data, KernelFamily::Matern52Ard, 5, 42);
    CHECK(five.log_marginal >= one.log_marginal - 1e-9);
    // And the optimum is never worse than the initialization heuristic.
    const KernelSpec heuristic = heuristic_kernel(data, KernelFamily::Matern52Ard);
    CHECK(one.log_marginal >= log_marginal_likelihood(data, heuristic) - 1e-9);
}

TEST_CASE("degenerate data returns the heuristic with a warning flag") {
    Dataset data;
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(2, 1.0);
    for (int i = 0; i < 5; ++i) {
        Eigen::VectorXd y(1);
        y[0] = 0.1 * i;
        data.add(x, y);
    }
    const HyperFitResult fit = fit_hyperparameters(data, KernelFamily::Matern52Ard, 3, 1);
    CHECK(fit.degenerate);
    const KernelSpec heuristic = heuristic_kernel(data, KernelFamily::Matern52Ard);
    CHECK(fit.spec.noise_variance == doctest::Approx(heuristic.noise_variance));
    CHECK(fit.spec.signal_variance == doctest::Approx(heuristic.signal_variance));
}

TEST_CASE("duplicate inputs with zero noise factorize through jitter") {
    Dataset data;
    Eigen::VectorXd y1(1), y2(1);
    y1 << 1.0;
    y2 << 1.0;
    data.add(Eigen::VectorXd::Zero(2), y1);
    data.add(Eigen::VectorXd::Zero(2), y2);
    KernelSpec spec;
    spec.family = KernelFamily::SquaredExponentialArd;
    spec.lengthscales = Eigen::VectorXd::Ones(2);
    spec.signal_variance = 1.0;
    spec.noise_variance = 0.0;
    const FittedGP gp = fit_posterior(data, spec);
    CHECK(gp.jitter > 0.0);
    CHECK(gp.jitter <= 1e-4);
}

TEST_CASE("gp errors") {
    Dataset empty;
    KernelSpec spec;
    spec.family = KernelFamily::SquaredExponentialArd;
    spec.lengthscales = Eigen::VectorXd::Ones(2);
    CHECK_THROWS_AS(fit_posterior(empty, spec), std::invalid_argument);

    Dataset data;
    data.add(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(1));
    CHECK_THROWS_AS(fit_posterior(data, spec), std::invalid_argument);  // lengthscale dim
    CHECK_THROWS_AS(fit_hyperparameters(data, KernelFamily::Matern52Ard, 2, 0),
                    std::invalid_argument);  // needs >= 2 observations
}
