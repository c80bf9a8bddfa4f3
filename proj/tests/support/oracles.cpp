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

#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

namespace beacon::oracle {

double se_ard(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& ls) {
    double sum = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        const double d = (a[i] - b[i]) / ls[i];
        sum += d * d;
    }
    return std::exp(-0.5 * sum);
}

double matern52_ard(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& ls) {
    double sum = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        const double d = (a[i] - b[i]) / ls[i];
        sum += d * d;
    }
    const double r = std::sqrt(sum);
    const double s5 = std::sqrt(5.0);
    return (1.0 + s5 * r + 5.0 / 3.0 * r * r) * std::exp(-s5 * r);
}

double tanimoto(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    const double denom = na + nb - dot;
    if (denom <= 0.0) return 1.0;
    return dot / denom;
}

double extended_kernel(const KernelSpec& spec, const Eigen::VectorXd& a, int ja,
                       const Eigen::VectorXd& b, int jb) {
    double base = 0.0;
    switch (spec.family) {
        case KernelFamily::SquaredExponentialArd: base = se_ard(a, b, spec.lengthscales); break;
        case KernelFamily::Matern52Ard: base = matern52_ard(a, b, spec.lengthscales); break;
        case KernelFamily::Tanimoto: base = tanimoto(a, b); break;
    }
    return spec.signal_variance * spec.task_coupling(ja, jb) * base;
}

namespace {

// Fully materialized extended system, solved with pivoted LU.
struct DenseSystem {
    Eigen::MatrixXd kinv;
    Eigen::VectorXd alpha;
    Eigen::VectorXd prior_mean;
    Eigen::MatrixXd gram;  // including noise
};

DenseSystem dense_system(const Dataset& data, const KernelSpec& spec) {
    const int N = data.size();
    const int n = data.outcome_dim();
    const int M = N * n;
    DenseSystem sys;
    sys.gram.resize(M, M);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < N; ++i) {
            for (int jp = 0; jp < n; ++jp) {
                for (int ip = 0; ip < N; ++ip) {
                    sys.gram(j * N + i, jp * N + ip) =
                        extended_kernel(spec, data.inputs()[i], j, data.inputs()[ip], jp);
                }
            }
        }
    }
    for (int m = 0; m < M; ++m) sys.gram(m, m) += spec.noise_variance;

    sys.prior_mean.resize(n);
    for (int j = 0; j < n; ++j) {
        double mean = 0.0;
        for (const auto& y : data.outcomes()) mean += y[j];
        sys.prior_mean[j] = mean / N;
    }
    Eigen::VectorXd centered(M);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < N; ++i) {
            centered[j * N + i] = data.outcomes()[i][j] - sys.prior_mean[j];
        }
    }
    sys.kinv = sys.gram.fullPivLu().inverse();
    sys.alpha = sys.kinv * centered;
    return sys;
}

}  // namespace

DensePosterior dense_posterior(const Dataset& data, const KernelSpec& spec,
                               const Eigen::VectorXd& x) {
    const int N = data.size();
    const int n = data.outcome_dim();
    const DenseSystem sys = dense_system(data, spec);

    DensePosterior post;
    post.mean.resize(n);
    post.variance.resize(n);
    for (int j = 0; j < n; ++j) {
        Eigen::VectorXd cross(N * n);
        for (int jp = 0; jp < n; ++jp) {
            for (int i = 0; i < N; ++i) {
                cross[jp * N + i] = extended_kernel(spec, x, j, data.inputs()[i], jp);
            }
        }
        post.mean[j] = sys.prior_mean[j] + cross.dot(sys.alpha);
        post.variance[j] = extended_kernel(spec, x, j, x, j) - cross.dot(sys.kinv * cross);
    }
    return post;
}

double dense_log_marginal_likelihood(const Dataset& data, const KernelSpec& spec) {
    const int N = data.size();
    const int n = data.outcome_dim();
    const int M = N * n;
    const DenseSystem sys = dense_system(data, spec);
    Eigen::VectorXd centered(M);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < N; ++i) {
            centered[j * N + i] = data.outcomes()[i][j] - sys.prior_mean[j];
        }
    }
    const double quad = centered.dot(sys.alpha);
    const double logdet = std::log(sys.gram.fullPivLu().determinant());
    return -0.5 * quad - 0.5 * logdet - 0.5 * M * std::log(2.0 * M_PI);
}

double knn_novelty(const Eigen::VectorXd& y, const std::vector<Eigen::VectorXd>& points, int k,
                   bool manhattan) {
    if (points.empty()) throw std::invalid_argument("knn_novelty: empty");
    std::vector<double> dist;
    dist.reserve(points.size());
    for (const auto& p : points) {
        dist.push_back(manhattan ? (y - p).lpNorm<1>() : (y - p).norm());
    }
    std::sort(dist.begin(), dist.end());
    const int kk = std::min<int>(k, static_cast<int>(dist.size()));
    double sum = 0.0;
    for (int i = 0; i < kk; ++i) sum += dist[i];
    return sum / kk;
}

Eigen::VectorXd finite_difference_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                           const Eigen::VectorXd& x, double step) {
    Eigen::VectorXd grad(x.size());
    for (int i = 0; i < x.size(); ++i) {
        Eigen::VectorXd hi = x, lo = x;
        hi[i] += step;
        lo[i] -= step;
        grad[i] = (f(hi) - f(lo)) / (2.0 * step);
    }
    return grad;
}

double star_discrepancy_2d(const std::vector<Eigen::VectorXd>& points) {
    const double n = static_cast<double>(points.size());
    std::vector<double> xs{1.0}, ys{1.0};
    for (const auto& p : points) {
        xs.push_back(p[0]);
        ys.push_back(p[1]);
    }
    double worst = 0.0;
    for (const double cx : xs) {
        for (const double cy : ys) {
            int inside_closed = 0, inside_open = 0;
            for (const auto& p : points) {
                if (p[0] <= cx && p[1] <= cy) ++inside_closed;
                if (p[0] < cx && p[1] < cy) ++inside_open;
            }
            const double volume = cx * cy;
            worst = std::max(worst, std::abs(inside_closed / n - volume));
            worst = std::max(worst, std::abs(inside_open / n - volume));
        }
    }
    return worst;
}

Moments moments(const std::vector<double>& values) {
    Moments m;
    m.count = static_cast<int>(values.size());
    if (m.count == 0) return m;
    for (double v : values) m.mean += v;
    m.mean /= m.count;
    if (m.count > 1) {
        for (double v : values) m.variance += (v - m.mean) * (v - m.mean);
        m.variance /= (m.count - 1);
    }
    return m;
}

}  // namespace beacon::oracle
