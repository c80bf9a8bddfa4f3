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

#include "beacon/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace beacon {

namespace {
constexpr double kSqrt5 = 2.2360679774997896964091736687747;
}

std::string to_string(KernelFamily family) {
    switch (family) {
        case KernelFamily::SquaredExponentialArd: return "squared-exponential";
        case KernelFamily::Matern52Ard: return "matern52";
        case KernelFamily::Tanimoto: return "tanimoto";
    }
    return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
    if (name == "squared-exponential" || name == "rbf" || name == "se") {
        return KernelFamily::SquaredExponentialArd;
    }
    if (name == "matern52" || name == "matern-5/2") return KernelFamily::Matern52Ard;
    if (name == "tanimoto") return KernelFamily::Tanimoto;
    throw std::invalid_argument("unknown kernel family: " + name);
}

void KernelSpec::validate() const {
    if (signal_variance <= 0.0) throw std::invalid_argument("KernelSpec: signal_variance must be > 0");
    if (noise_variance < 0.0) throw std::invalid_argument("KernelSpec: noise_variance must be >= 0");
    if (family != KernelFamily::Tanimoto) {
        if (lengthscales.size() < 1) throw std::invalid_argument("KernelSpec: lengthscales required");
        for (int i = 0; i < lengthscales.size(); ++i) {
            if (!(lengthscales[i] > 0.0)) {
                throw std::invalid_argument("KernelSpec: lengthscales must be > 0");
            }
        }
    }
    const auto& b = task_coupling;
    if (b.rows() < 1 || b.rows() != b.cols()) {
        throw std::invalid_argument("KernelSpec: task_coupling must be square with dim >= 1");
    }
    for (int i = 0; i < b.rows(); ++i) {
        if (std::abs(b(i, i) - 1.0) > 1e-12) {
            throw std::invalid_argument("KernelSpec: task_coupling diagonal must be 1");
        }
        for (int j = 0; j < i; ++j) {
            if (std::abs(b(i, j) - b(j, i)) > 1e-12) {
                throw std::invalid_argument("KernelSpec: task_coupling must be symmetric");
            }
        }
    }
}

double input_kernel(const KernelSpec& spec, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw std::invalid_argument("input_kernel: dimension mismatch");
    switch (spec.family) {
        case KernelFamily::SquaredExponentialArd: {
            const Eigen::VectorXd d = (a - b).cwiseQuotient(spec.lengthscales);
            return std::exp(-0.5 * d.squaredNorm());
        }
        case KernelFamily::Matern52Ard: {
            const Eigen::VectorXd d = (a - b).cwiseQuotient(spec.lengthscales);
            const double r = d.norm();
            return (1.0 + kSqrt5 * r + (5.0 / 3.0) * r * r) * std::exp(-kSqrt5 * r);
        }
        case KernelFamily::Tanimoto: {
            const double dot = a.dot(b);
            const double denom = a.squaredNorm() + b.squaredNorm() - dot;
            if (denom <= 0.0) return 1.0;  // both all-zero, by convention
            return dot / denom;
        }
    }
    throw std::logic_error("input_kernel: unreachable kernel family");
}

Eigen::VectorXd input_kernel_gradient(const KernelSpec& spec, const Eigen::VectorXd& a,
                                      const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw std::invalid_argument("input_kernel_gradient: dimension mismatch");
    switch (spec.family) {
        case KernelFamily::SquaredExponentialArd: {
            const Eigen::VectorXd d = (a - b).cwiseQuotient(spec.lengthscales);
            const double k = std::exp(-0.5 * d.squaredNorm());
            return -k * d.cwiseQuotient(spec.lengthscales);
        }
        case KernelFamily::Matern52Ard: {
            const Eigen::VectorXd d = (a - b).cwiseQuotient(spec.lengthscales);
            const double r = d.norm();
            // dk/dr = -(5/3) r (1 + sqrt5 r) exp(-sqrt5 r); dk/da = (dk/dr / r) * d/ls,
            // and dk/dr / r stays finite as r -> 0.
            const double ratio = -(5.0 / 3.0) * (1.0 + kSqrt5 * r) * std::exp(-kSqrt5 * r);
            return ratio * d.cwiseQuotient(spec.lengthscales);
        }
        case KernelFamily::Tanimoto:
            throw std::invalid_argument("input_kernel_gradient: tanimoto kernel is not differentiable here");
    }
    throw std::logic_error("input_kernel_gradient: unreachable kernel family");
}

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& a, int task_a,
                   const Eigen::VectorXd& b, int task_b) {
    const int n = spec.outcome_dim();
    if (task_a < 0 || task_a >= n || task_b < 0 || task_b >= n) {
        throw std::invalid_argument("kernel_eval: task index out of range");
    }
    return spec.signal_variance * spec.task_coupling(task_a, task_b) * input_kernel(spec, a, b);
}

}  // namespace beacon
