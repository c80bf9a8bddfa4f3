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

#include "beacon/problems.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace beacon {

ContinuousProblem::ContinuousProblem(std::string name, Box bounds, int outcome_dim,
                                     std::function<Eigen::VectorXd(const Eigen::VectorXd&)> evaluator,
                                     double noise_std)
    : name_(std::move(name)),
      bounds_(std::move(bounds)),
      outcome_dim_(outcome_dim),
      evaluator_(std::move(evaluator)),
      noise_std_(noise_std) {
    bounds_.validate("ContinuousProblem(" + name_ + ")");
    if (outcome_dim_ < 1) throw std::invalid_argument("ContinuousProblem: outcome_dim must be >= 1");
    if (noise_std_ < 0.0) throw std::invalid_argument("ContinuousProblem: noise_std must be >= 0");
}

Eigen::VectorXd ContinuousProblem::evaluate(const Eigen::VectorXd& x) const {
    if (x.size() != bounds_.dim()) {
        throw std::invalid_argument(name_ + ": input dim mismatch");
    }
    Eigen::VectorXd y = evaluator_(x);
    if (y.size() != outcome_dim_ || !y.allFinite()) {
        throw std::runtime_error(name_ + ": evaluator produced a bad outcome");
    }
    return y;
}

QueryResult ContinuousProblem::query(const Eigen::VectorXd& x, Rng& rng) const {
    QueryResult result;
    result.noiseless = evaluate(x);
    result.noisy = result.noiseless;
    if (noise_std_ > 0.0) {
        for (int j = 0; j < result.noisy.size(); ++j) result.noisy[j] += noise_std_ * rng.normal();
    }
    return result;
}

PoolProblem::PoolProblem(std::string name, Eigen::MatrixXd candidates, Eigen::MatrixXd outcomes,
                         double noise_std)
    : name_(std::move(name)),
      candidates_(std::move(candidates)),
      outcomes_(std::move(outcomes)),
      noise_std_(noise_std) {
    if (candidates_.rows() < 1 || candidates_.rows() != outcomes_.rows()) {
        throw std::invalid_argument("PoolProblem: candidates/outcomes row mismatch");
    }
    if (!candidates_.allFinite() || !outcomes_.allFinite()) {
        throw std::invalid_argument("PoolProblem: non-finite entries");
    }
    if (noise_std_ < 0.0) throw std::invalid_argument("PoolProblem: noise_std must be >= 0");
    // No duplicate candidate rows: identical features with distinct outcomes
    // would make the query interface ambiguous.
    std::map<std::vector<double>, int> seen;
    for (int i = 0; i < candidates_.rows(); ++i) {
        std::vector<double> row(candidates_.row(i).begin(), candidates_.row(i).end());
        auto [it, inserted] = seen.emplace(std::move(row), i);
        if (!inserted) {
            throw std::invalid_argument("PoolProblem: duplicate candidate rows " +
                                        std::to_string(it->second) + " and " + std::to_string(i));
        }
    }
}

QueryResult PoolProblem::query(int index, Rng& rng) const {
    if (index < 0 || index >= size()) throw std::invalid_argument("PoolProblem: index out of range");
    QueryResult result;
    result.noiseless = outcomes_.row(index).transpose();
    result.noisy = result.noiseless;
    if (noise_std_ > 0.0) {
        for (int j = 0; j < result.noisy.size(); ++j) result.noisy[j] += noise_std_ * rng.normal();
    }
    return result;
}

const ContinuousProblem& Problem::continuous() const {
    if (is_pool()) throw std::logic_error("Problem: not a continuous problem");
    return std::get<ContinuousProblem>(impl_);
}

const PoolProblem& Problem::pool() const {
    if (!is_pool()) throw std::logic_error("Problem: not a pool problem");
    return std::get<PoolProblem>(impl_);
}

const std::string& Problem::name() const {
    return is_pool() ? pool().name() : continuous().name();
}

int Problem::input_dim() const { return is_pool() ? pool().input_dim() : continuous().input_dim(); }
int Problem::outcome_dim() const { return is_pool() ? pool().outcome_dim() : continuous().outcome_dim(); }
double Problem::noise_std() const { return is_pool() ? pool().noise_std() : continuous().noise_std(); }

Box Problem::input_box() const {
    if (!is_pool()) return continuous().bounds();
    const auto& c = pool().candidates();
    Box box;
    box.lower = c.colwise().minCoeff().transpose();
    box.upper = c.colwise().maxCoeff().transpose();
    // Degenerate features widen a hair so normalization stays well-defined.
    for (int i = 0; i < box.lower.size(); ++i) {
        if (box.upper[i] - box.lower[i] < 1e-12) {
            box.lower[i] -= 0.5;
            box.upper[i] += 0.5;
        }
    }
    return box;
}

double ackley(const Eigen::VectorXd& x) {
    const double a = 20.0, b = 0.2, c = 2.0 * M_PI;
    const double d = static_cast<double>(x.size());
    const double sq = x.squaredNorm() / d;
    double cs = 0.0;
    for (int i = 0; i < x.size(); ++i) cs += std::cos(c * x[i]);
    cs /= d;
    return -a * std::exp(-b * std::sqrt(sq)) - std::exp(cs) + a + std::exp(1.0);
}

double rosenbrock(const Eigen::VectorXd& x) {
    double sum = 0.0;
    for (int i = 0; i + 1 < x.size(); ++i) {
        const double t1 = x[i + 1] - x[i] * x[i];
        const double t2 = 1.0 - x[i];
        sum += 100.0 * t1 * t1 + t2 * t2;
    }
    return sum;
}

double styblinski_tang(const Eigen::VectorXd& x) {
    double sum = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        const double v = x[i];
        sum += v * v * v * v - 16.0 * v * v + 5.0 * v;
    }
    return 0.5 * sum;
}

namespace {
// Gate width of the radial decays in multi_output_plus. Frozen: tails beyond
// the dense center need |(x3,x4)| (resp. |(x1,x2)|) within ~2 of the origin,
// which uniform sampling hits rarely, giving the long-tail scatter.
constexpr double kPlusGateWidth = 1.5;
}  // namespace

Eigen::VectorXd multi_output_plus(const Eigen::VectorXd& x) {
    if (x.size() != 6) throw std::invalid_argument("multi_output_plus: needs 6 inputs");
    for (int i = 0; i < 6; ++i) {
        if (!(x[i] >= -5.0 && x[i] <= 5.0)) {
            throw std::invalid_argument("multi_output_plus: input outside [-5, 5]^6");
        }
    }
    const double w2 = 2.0 * kPlusGateWidth * kPlusGateWidth;
    Eigen::VectorXd y(2);
    y[0] = (x[0] + x[1]) * std::exp(-(x[2] * x[2] + x[3] * x[3]) / w2);
    y[1] = (x[4] + x[5]) * std::exp(-(x[0] * x[0] + x[1] * x[1]) / w2);
    return y;
}

namespace {

Box uniform_box(int dimension, double lo, double hi) {
    Box box;
    box.lower = Eigen::VectorXd::Constant(dimension, lo);
    box.upper = Eigen::VectorXd::Constant(dimension, hi);
    return box;
}

ContinuousProblem make_scalar_problem(std::string name, Box box, double (*fn)(const Eigen::VectorXd&),
                                      double noise_std) {
    auto evaluator = [fn](const Eigen::VectorXd& x) {
        Eigen::VectorXd y(1);
        y[0] = fn(x);
        return y;
    };
    const double ns = noise_std < 0.0 ? 0.0 : noise_std;  // resolved below when auto
    ContinuousProblem problem(std::move(name), std::move(box), 1, evaluator, ns);
    if (noise_std < 0.0) problem.set_noise_std(default_noise_std(Problem(problem)));
    return problem;
}

}  // namespace

// Ackley runs on [-5, 10]^d rather than the full [-32.768, 32.768]^d. On the
// full box the attraction funnel occupies a ~3e-4 volume fraction and the
// surrogate carries no usable structure at double-digit evaluation budgets;
// the restricted box keeps the funnel resolvable, which is the regime the
// reachability benchmarks operate in.
ContinuousProblem make_ackley(int dimension, double noise_std) {
    if (dimension < 1) throw std::invalid_argument("make_ackley: dimension must be >= 1");
    return make_scalar_problem("ackley-d" + std::to_string(dimension),
                               uniform_box(dimension, -5.0, 10.0), &ackley, noise_std);
}

ContinuousProblem make_rosenbrock(int dimension, double noise_std) {
    if (dimension < 2) throw std::invalid_argument("make_rosenbrock: dimension must be >= 2");
    return make_scalar_problem("rosenbrock-d" + std::to_string(dimension),
                               uniform_box(dimension, -5.0, 10.0), &rosenbrock, noise_std);
}

ContinuousProblem make_styblinski_tang(int dimension, double noise_std) {
    if (dimension < 1) throw std::invalid_argument("make_styblinski_tang: dimension must be >= 1");
    return make_scalar_problem("styblinski-tang-d" + std::to_string(dimension),
                               uniform_box(dimension, -5.0, 5.0), &styblinski_tang, noise_std);
}

ContinuousProblem make_multi_output_plus(double noise_std) {
    const double ns = noise_std < 0.0 ? 0.0 : noise_std;
    ContinuousProblem problem("multi-output-plus", uniform_box(6, -5.0, 5.0), 2,
                              [](const Eigen::VectorXd& x) { return multi_output_plus(x); }, ns);
    if (noise_std < 0.0) problem.set_noise_std(default_noise_std(Problem(problem)));
    return problem;
}

void RangeSpec::validate() const {
    if (ranges.empty()) throw std::invalid_argument("RangeSpec: empty");
    for (const auto& [lo, hi] : ranges) {
        if (!(hi - lo >= 1e-9)) {
            throw std::invalid_argument("RangeSpec: degenerate outcome range (hi - lo < 1e-9)");
        }
    }
}

RangeSpec estimate_outcome_range(const Problem& problem, int sample_count, std::uint64_t seed) {
    RangeSpec spec;
    spec.provenance = RangeSpec::Provenance::Empirical;
    const int n = problem.outcome_dim();
    spec.ranges.assign(n, {std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity()});
    if (problem.is_pool()) {
        const auto& y = problem.pool().oracle_outcomes();
        spec.sample_count = static_cast<int>(y.rows());
        spec.seed = 0;
        for (int j = 0; j < n; ++j) {
            spec.ranges[j] = {y.col(j).minCoeff(), y.col(j).maxCoeff()};
        }
        return spec;
    }
    spec.sample_count = sample_count;
    spec.seed = seed;
    const auto& prob = problem.continuous();
    Rng rng(mix_seed(seed, 0x72616e6765ULL));
    for (int s = 0; s < sample_count; ++s) {
        const Eigen::VectorXd x = rng.uniform_vector(prob.bounds().lower, prob.bounds().upper);
        const Eigen::VectorXd y = prob.evaluate(x);
        for (int j = 0; j < n; ++j) {
            spec.ranges[j].first = std::min(spec.ranges[j].first, y[j]);
            spec.ranges[j].second = std::max(spec.ranges[j].second, y[j]);
        }
    }
    return spec;
}

BehaviorSpace make_space(const Problem& problem, const std::vector<int>& bins_per_dim,
                         const std::optional<RangeSpec>& range) {
    const RangeSpec spec = range.has_value() ? *range : estimate_outcome_range(problem);
    spec.validate();
    if (static_cast<int>(spec.ranges.size()) != problem.outcome_dim() ||
        static_cast<int>(bins_per_dim.size()) != problem.outcome_dim()) {
        throw std::invalid_argument("make_space: range/bins dim must match outcome dim");
    }
    OutcomeBox box;
    box.lower.resize(spec.ranges.size());
    box.upper.resize(spec.ranges.size());
    for (std::size_t j = 0; j < spec.ranges.size(); ++j) {
        box.lower[j] = spec.ranges[j].first;
        box.upper[j] = spec.ranges[j].second;
    }
    return BehaviorSpace(std::move(box), bins_per_dim);
}

double default_noise_std(const Problem& problem) {
    Eigen::MatrixXd samples;
    if (problem.is_pool()) {
        samples = problem.pool().oracle_outcomes();
    } else {
        const auto& prob = problem.continuous();
        const int count = 100000;
        samples.resize(count, prob.outcome_dim());
        Rng rng(mix_seed(kRangeSeed, 0x6e6f697365ULL));
        for (int s = 0; s < count; ++s) {
            const Eigen::VectorXd x = rng.uniform_vector(prob.bounds().lower, prob.bounds().upper);
            samples.row(s) = prob.evaluate(x).transpose();
        }
    }
    double pooled = 0.0;
    for (int j = 0; j < samples.cols(); ++j) {
        const double mean = samples.col(j).mean();
        pooled += std::sqrt((samples.col(j).array() - mean).square().mean());
    }
    pooled /= static_cast<double>(samples.cols());
    return 0.01 * pooled;
}

namespace {

double parse_cell(const std::string& cell, int line_number, int column) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
        if (pos != cell.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("pool CSV line " + std::to_string(line_number) + ", column " +
                                 std::to_string(column + 1) + ": bad numeric cell '" + cell + "'");
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

}  // namespace

PoolProblem load_pool(const std::string& path, int input_dim, int outcome_dim,
                      std::vector<std::string>* warnings, double noise_std) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("load_pool: cannot open " + path);
    std::string line;
    if (!std::getline(file, line)) throw std::runtime_error("load_pool: empty file " + path);
    const auto header = split_csv(line);
    if (static_cast<int>(header.size()) != input_dim + outcome_dim) {
        throw std::runtime_error("load_pool: header has " + std::to_string(header.size()) +
                                 " columns, expected " + std::to_string(input_dim + outcome_dim) +
                                 " (x1..x" + std::to_string(input_dim) + ",y1..y" +
                                 std::to_string(outcome_dim) + ")");
    }

    std::vector<std::vector<double>> rows;
    std::map<std::vector<double>, int> seen;
    int dropped = 0;
    int line_number = 1;
    while (std::getline(file, line)) {
        ++line_number;
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (static_cast<int>(cells.size()) != input_dim + outcome_dim) {
            throw std::runtime_error("pool CSV line " + std::to_string(line_number) + ": has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(input_dim + outcome_dim));
        }
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            row[c] = parse_cell(cells[c], line_number, static_cast<int>(c));
        }
        auto [it, inserted] = seen.emplace(row, line_number);
        if (!inserted) {
            ++dropped;
            continue;  // exact duplicate row
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("load_pool: no candidate rows in " + path);
    if (dropped > 0 && warnings != nullptr) {
        warnings->push_back("load_pool: dropped " + std::to_string(dropped) +
                            " exact duplicate rows from " + path);
    }

    Eigen::MatrixXd candidates(rows.size(), input_dim);
    Eigen::MatrixXd outcomes(rows.size(), outcome_dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int c = 0; c < input_dim; ++c) candidates(i, c) = rows[i][c];
        for (int c = 0; c < outcome_dim; ++c) outcomes(i, c) = rows[i][input_dim + c];
    }
    return PoolProblem(path, std::move(candidates), std::move(outcomes), noise_std);
}

void write_pool_csv(const std::string& path, const Eigen::MatrixXd& candidates,
                    const Eigen::MatrixXd& outcomes) {
    if (candidates.rows() != outcomes.rows()) {
        throw std::invalid_argument("write_pool_csv: row mismatch");
    }
    std::ofstream file(path);
    if (!file) throw std::runtime_error("write_pool_csv: cannot open " + path);
    for (int c = 0; c < candidates.cols(); ++c) file << (c ? "," : "") << "x" << (c + 1);
    for (int c = 0; c < outcomes.cols(); ++c) file << ",y" << (c + 1);
    file << "\n";
    char buf[64];
    for (int i = 0; i < candidates.rows(); ++i) {
        for (int c = 0; c < candidates.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", candidates(i, c));
            file << (c ? "," : "") << buf;
        }
        for (int c = 0; c < outcomes.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", outcomes(i, c));
            file << "," << buf;
        }
        file << "\n";
    }
    if (!file.good()) throw std::runtime_error("write_pool_csv: write failed for " + path);
}

}  // namespace beacon
