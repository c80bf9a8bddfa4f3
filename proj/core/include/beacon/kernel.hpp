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

#ifndef BEACON_KERNEL_HPP
#define BEACON_KERNEL_HPP

#include <string>

#include <Eigen/Core>

namespace beacon {

enum class KernelFamily {
    SquaredExponentialArd,
    Matern52Ard,
    Tanimoto,  // binary feature vectors; no lengthscales
};

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

// Kernel over the extended space of (input, output-index) pairs:
//   k((x,j), (x',j')) = signal_variance * task_coupling[j,j'] * input_kernel(x, x').
// task_coupling is a symmetric PSD matrix with unit diagonal; identity means
// independent outputs.
struct KernelSpec {
    KernelFamily family = KernelFamily::Matern52Ard;
    Eigen::VectorXd lengthscales;   // size d for the ARD families, empty for tanimoto
    double signal_variance = 1.0;
    double noise_variance = 1e-2;
    Eigen::MatrixXd task_coupling = Eigen::MatrixXd::Identity(1, 1);

    int outcome_dim() const { return static_cast<int>(task_coupling.rows()); }

    // Throws std::invalid_argument on violated invariants.
    void validate() const;
};

// Input-space kernel value, excluding signal variance and task coupling.
// ARD families return the stationary correlation in (0, 1]. Tanimoto returns
// <a,b> / (|a|^2 + |b|^2 - <a,b>); two all-zero vectors are defined to have
// similarity 1 by convention.
double input_kernel(const KernelSpec& spec, const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// d input_kernel / d a. Throws for tanimoto (the discrete mode never
// differentiates).
Eigen::VectorXd input_kernel_gradient(const KernelSpec& spec, const Eigen::VectorXd& a,
                                      const Eigen::VectorXd& b);

// Full extended-space kernel between (a, task_a) and (b, task_b).
double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& a, int task_a,
                   const Eigen::VectorXd& b, int task_b);

}  // namespace beacon

#endif  // BEACON_KERNEL_HPP
