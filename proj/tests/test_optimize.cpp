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

#include "beacon/optimize.hpp"

using namespace beacon;

TEST_CASE("unconstrained quadratic converges to the minimizer") {
    const Eigen::VectorXd target = (Eigen::VectorXd(3) << 1.0, -2.0, 0.5).finished();
    const ObjectiveFn f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
        if (grad) *grad = 2.0 * (x - target);
        return (x - target).squaredNorm();
    };
    const OptimizeResult res =
        minimize_lbfgs(f, Eigen::VectorXd::Zero(3), Eigen::VectorXd(), Eigen::VectorXd());
    CHECK((res.x - target).norm() < 1e-6);
    CHECK(res.value < 1e-10);
}

TEST_CASE("box projection pins the solution to the feasible boundary") {
    const Eigen::VectorXd target = (Eigen::VectorXd(2) << 5.0, -5.0).finished();
    const ObjectiveFn f = [&](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
        if (grad) *grad = 2.0 * (x - target);
        return (x - target).squaredNorm();
    };
    const Eigen::VectorXd lower = Eigen::VectorXd::Constant(2, -1.0);
    const Eigen::VectorXd upper = Eigen::VectorXd::Constant(2, 1.0);
    const OptimizeResult res = minimize_lbfgs(f, Eigen::VectorXd::Zero(2), lower, upper);
    CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(res.x[1] == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("rosenbrock valley is followed to the optimum") {
    const ObjectiveFn f = [](const Eigen::VectorXd& x, Eigen::VectorXd* grad) {
        const double a = x[1] - x[0] * x[0];
        const double b = 1.0 - x[0];
        if (grad) {
            (*grad)[0] = -400.0 * a * x[0] - 2.0 * b;
            (*grad)[1] = 200.0 * a;
        }
        return 100.0 * a * a + b * b;
    };
    OptimizeOptions opt;
    opt.max_iterations = 400;
    const OptimizeResult res = minimize_lbfgs(f, (Eigen::VectorXd(2) << -1.2, 1.0).finished(),
                                              Eigen::VectorXd(), Eigen::VectorXd(), opt);
    CHECK((res.x - Eigen::VectorXd::Ones(2)).norm() < 1e-4);
}

TEST_CASE("non-finite start is rejected") {
    const ObjectiveFn f = [](const Eigen::VectorXd&, Eigen::VectorXd* grad) {
        if (grad) grad->setZero(1);
        return std::numeric_limits<double>::infinity();
    };
    CHECK_THROWS_AS(
        minimize_lbfgs(f, Eigen::VectorXd::Zero(1), Eigen::VectorXd(), Eigen::VectorXd()),
        std::invalid_argument);
}
