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

#ifndef BEACON_OPTIMIZE_HPP
#define BEACON_OPTIMIZE_HPP

#include <functional>

#include <Eigen/Core>

namespace beacon {

// Objective with gradient. Must fill *grad when grad != nullptr and return
// the function value. Non-finite values are treated as line-search rejections.
using ObjectiveFn = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;

struct OptimizeOptions {
    int max_iterations = 100;
    int history = 10;          // L-BFGS memory
    double grad_tolerance = 1e-6;
    double step_tolerance = 1e-10;
};

struct OptimizeResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Minimizes f over the box [lower, upper] with limited-memory BFGS steps and
// projection onto the box (backtracking Armijo line search on the projected
// path). Pass empty bounds for an unconstrained run.
OptimizeResult minimize_lbfgs(const ObjectiveFn& f, Eigen::VectorXd x0,
                              const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                              const OptimizeOptions& options = {});

}  // namespace beacon

#endif  // BEACON_OPTIMIZE_HPP
