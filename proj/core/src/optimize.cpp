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

#include "beacon/optimize.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace beacon {

namespace {

Eigen::VectorXd project(const Eigen::VectorXd& x, const Eigen::VectorXd& lo,
                        const Eigen::VectorXd& hi) {
    if (lo.size() == 0) return x;
    return x.cwiseMax(lo).cwiseMin(hi);
}

}  // namespace

OptimizeResult minimize_lbfgs(const ObjectiveFn& f, Eigen::VectorXd x0,
                              const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                              const OptimizeOptions& options) {
    const bool bounded = lower.size() > 0;
    if (bounded && (lower.size() != x0.size() || upper.size() != x0.size())) {
        throw std::invalid_argument("minimize_lbfgs: bounds/initial point dimension mismatch");
    }
    const int dim = static_cast<int>(x0.size());

    Eigen::VectorXd x = project(std::move(x0), lower, upper);
    Eigen::VectorXd grad(dim);
    double fx = f(x, &grad);
    if (!std::isfinite(fx)) {
        throw std::invalid_argument("minimize_lbfgs: objective not finite at the start point");
    }

    struct Pair {
        Eigen::VectorXd s, y;
        double rho;
    };
    std::deque<Pair> memory;

    OptimizeResult result;
    result.x = x;
    result.value = fx;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        // Projected-gradient stationarity measure.
        const Eigen::VectorXd pg = x - project(x - grad, lower, upper);
        if (pg.lpNorm<Eigen::Infinity>() <= options.grad_tolerance * (1.0 + std::abs(fx))) {
            result.converged = true;
            break;
        }

        // Two-loop recursion for the search direction.
        Eigen::VectorXd q = grad;
        std::vector<double> alpha(memory.size());
        for (int i = static_cast<int>(memory.size()) - 1; i >= 0; --i) {
            alpha[i] = memory[i].rho * memory[i].s.dot(q);
            q -= alpha[i] * memory[i].y;
        }
        if (!memory.empty()) {
            const auto& last = memory.back();
            q *= last.s.dot(last.y) / last.y.squaredNorm();
        }
        for (std::size_t i = 0; i < memory.size(); ++i) {
            const double beta = memory[i].rho * memory[i].y.dot(q);
            q += (alpha[i] - beta) * memory[i].s;
        }
        Eigen::VectorXd direction = -q;
        if (direction.dot(grad) > -1e-14 * grad.norm() * direction.norm()) {
            direction = -grad;  // not a descent direction, restart from steepest descent
        }

        // Weak-Wolfe line search along the projected path: bisect when the
        // sufficient-decrease test fails, extend when curvature says the step
        // is too short. Once the projection bends the path, sufficient
        // decrease alone accepts.
        const double slope = grad.dot(direction);
        constexpr double kArmijo = 1e-4;
        constexpr double kCurvature = 0.9;
        double step = 1.0;
        double step_lo = 0.0;
        double step_hi = std::numeric_limits<double>::infinity();
        Eigen::VectorXd x_next;
        Eigen::VectorXd grad_next(dim);
        double fx_next = std::numeric_limits<double>::infinity();
        bool accepted = false;
        Eigen::VectorXd fallback_x, fallback_grad;
        double fallback_fx = std::numeric_limits<double>::infinity();
        for (int ls = 0; ls < 60; ++ls) {
            x_next = project(x + step * direction, lower, upper);
            const Eigen::VectorXd actual_step = x_next - x;
            if (actual_step.lpNorm<Eigen::Infinity>() <
                options.step_tolerance * (1.0 + x.lpNorm<Eigen::Infinity>())) {
                break;  // pinned to the boundary
            }
            const bool projected = (x_next - (x + step * direction)).lpNorm<Eigen::Infinity>() >
                                   1e-14 * (1.0 + x_next.lpNorm<Eigen::Infinity>());
            fx_next = f(x_next, &grad_next);
            const double decrease = kArmijo * std::min(slope * step, grad.dot(actual_step));
            if (!std::isfinite(fx_next) || fx_next > fx + decrease) {
                step_hi = step;
                step = 0.5 * (step_lo + step_hi);
                continue;
            }
            if (fx_next < fallback_fx) {  // keep the best sufficient-decrease point
                fallback_fx = fx_next;
                fallback_x = x_next;
                fallback_grad = grad_next;
            }
            if (!projected && grad_next.dot(direction) < kCurvature * slope && step < 1e6) {
                // Sufficient decrease holds but the slope is still steep:
                // the step is too short for a stable curvature pair.
                step_lo = step;
                step = std::isfinite(step_hi) ? 0.5 * (step_lo + step_hi) : 2.0 * step;
                continue;
            }
            accepted = true;
            break;
        }
        if (!accepted && std::isfinite(fallback_fx)) {
            x_next = fallback_x;
            grad_next = fallback_grad;
            fx_next = fallback_fx;
            accepted = true;
        }
        if (!accepted) break;

        const Eigen::VectorXd s = x_next - x;
        const Eigen::VectorXd ygrad = grad_next - grad;
        const double sy = s.dot(ygrad);
        if (sy > 1e-12 * s.norm() * ygrad.norm()) {
            memory.push_back({s, ygrad, 1.0 / sy});
            if (static_cast<int>(memory.size()) > options.history) memory.pop_front();
        }

        x = std::move(x_next);
        grad = std::move(grad_next);
        const double improvement = fx - fx_next;
        fx = fx_next;
        result.iterations = iter + 1;
        if (fx < result.value) {
            result.value = fx;
            result.x = x;
        }
        if (improvement < options.step_tolerance * (1.0 + std::abs(fx))) {
            result.converged = true;
            break;
        }
    }
    return result;
}

}  // namespace beacon
