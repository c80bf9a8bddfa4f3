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
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "beacon/problems.hpp"
#include "support/oracles.hpp"

using namespace beacon;

namespace {

// Independent re-implementations of the synthetic evaluators, written
// directly from the standard formulas.
double ackley_reference(const Eigen::VectorXd& x) {
    const double d = x.size();
    double sum_sq = 0.0, sum_cos = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        sum_sq += x[i] * x[i];
        sum_cos += std::cos(2.0 * M_PI * x[i]);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sum_sq / d)) - std::exp(sum_cos / d) + 20.0 +
           std::exp(1.0);
}

double rosenbrock_reference(const Eigen::VectorXd& x) {
    double s = 0.0;
    for (int i = 0; i < x.size() - 1; ++i) {
        s += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1.0 - x[i], 2);
    }
    return s;
}

double styblinski_reference(const Eigen::VectorXd& x) {
    double s = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        s += std::pow(x[i], 4) - 16.0 * std::pow(x[i], 2) + 5.0 * x[i];
    }
    return s / 2.0;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("ackley minimum, symmetry, and fixed-point value") {
    CHECK(ackley(Eigen::VectorXd::Zero(4)) == doctest::Approx(0.0).epsilon(1e-12));
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
    CHECK(ackley(ones) == doctest::Approx(ackley_reference(ones)).epsilon(1e-12));
    Eigen::VectorXd a(4), b(4);
    a << 1, 2, 0, 0;
    b << 0, 0, 2, 1;
    CHECK(ackley(a) == doctest::Approx(ackley(b)).epsilon(1e-12));
}

TEST_CASE("rosenbrock and styblinski-tang known values") {
    CHECK(rosenbrock(Eigen::VectorXd::Ones(5)) == doctest::Approx(0.0));
    CHECK(styblinski_tang(Eigen::VectorXd::Zero(3)) == doctest::Approx(0.0));
    const Eigen::VectorXd minimizer = Eigen::VectorXd::Constant(3, -2.903534);
    CHECK(styblinski_tang(minimizer) ==
          doctest::Approx(styblinski_reference(minimizer)).epsilon(1e-12));
    CHECK(styblinski_tang(minimizer) == doctest::Approx(-39.166 * 3).epsilon(1e-4));
}

TEST_CASE("synthetic evaluators match independent references on random points") {
    Rng rng(11);
    for (int trial = 0; trial < 1000; ++trial) {
        const int d = 2 + static_cast<int>(rng.uniform_int(5));
        const Eigen::VectorXd x = 4.0 * rng.normal_vector(d);
        CHECK(ackley(x) == doctest::Approx(ackley_reference(x)).epsilon(1e-12));
        CHECK(rosenbrock(x) == doctest::Approx(rosenbrock_reference(x)).epsilon(1e-12));
        CHECK(styblinski_tang(x) == doctest::Approx(styblinski_reference(x)).epsilon(1e-12));
    }
}

TEST_CASE("multi_output_plus shape properties") {
    // determinism and the dense center at the origin
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(6);
    CHECK(multi_output_plus(zero) == multi_output_plus(zero));
    CHECK(multi_output_plus(zero).norm() == doctest::Approx(0.0));

    Eigen::VectorXd outside = Eigen::VectorXd::Zero(6);
    outside[2] = 5.5;
    CHECK_THROWS_AS(multi_output_plus(outside), std::invalid_argument);

    // Outcome scatter under uniform sampling is long-tailed: most samples land
    // near the center, and fewer than half of the 10x10 bins are occupied.
    const ContinuousProblem problem = make_multi_output_plus(0.0);
    const Problem wrapped(problem);
    const BehaviorSpace space = make_space(wrapped, {10, 10});
    Rng rng(kRangeSeed);
    BinSet occupied;
    int center_hits = 0;
    const int count = 10000;
    const BinId center_bin = space.project(multi_output_plus(Eigen::VectorXd::Zero(6)));
    for (int s = 0; s < count; ++s) {
        const Eigen::VectorXd x = rng.uniform_vector(problem.bounds().lower, problem.bounds().upper);
        const BinId bin = space.project(problem.evaluate(x));
        occupied.insert(bin);
        if (bin == center_bin) ++center_hits;
    }
    CHECK(occupied.size() < 50);                 // < 50% of the grid
    CHECK(center_hits > count / 20);             // the origin's bin is in the dense region
}

TEST_CASE("make_space resolves bins and auto ranges") {
    const Problem single(make_ackley(4, 0.0));
    const BehaviorSpace space = make_space(single, {25});
    CHECK(space.total_bins() == 25);
    CHECK(space.box().lower[0] >= 0.0);  // ackley is non-negative

    const Problem multi(make_multi_output_plus(0.0));
    CHECK(make_space(multi, {10, 10}).total_bins() == 100);

    // auto-ranging is reproducible
    const RangeSpec r1 = estimate_outcome_range(single);
    const RangeSpec r2 = estimate_outcome_range(single);
    CHECK(r1.ranges[0].first == r2.ranges[0].first);
    CHECK(r1.ranges[0].second == r2.ranges[0].second);
    CHECK(r1.provenance == RangeSpec::Provenance::Empirical);
    CHECK(r1.sample_count == 100000);
    CHECK(r1.seed == kRangeSeed);

    // degenerate explicit range errors
    RangeSpec bad;
    bad.ranges = {{1.0, 1.0 + 1e-12}};
    CHECK_THROWS_AS(make_space(single, {25}, bad), std::invalid_argument);
}

TEST_CASE("pool CSV round-trips exactly and errors carry line numbers") {
    const std::string path = temp_path("beacon_test_pool.csv");
    Rng rng(3);
    Eigen::MatrixXd candidates(3, 2), outcomes(3, 1);
    candidates << 0.1, 0.2, 0.30000000000000004, -1.5, 2.0 / 3.0, 1e-17;
    outcomes << 1.25, -0.75, 0.3333333333333333;
    write_pool_csv(path, candidates, outcomes);

    const PoolProblem pool = load_pool(path, 2, 1);
    CHECK(pool.size() == 3);
    CHECK(pool.candidates() == candidates);
    CHECK(pool.oracle_outcomes() == outcomes);

    {
        std::ofstream bad(path);
        bad << "x1,x2,y1\n0.1,0.2,1.0\n0.3,oops,2.0\n";
    }
    CHECK_THROWS_WITH_AS(load_pool(path, 2, 1), doctest::Contains("line 3"), std::runtime_error);
    // declared dimensions must match the header
    CHECK_THROWS_WITH_AS(load_pool(path, 3, 1), doctest::Contains("columns"), std::runtime_error);

    {
        std::ofstream dup(path);
        dup << "x1,x2,y1\n0.1,0.2,1.0\n0.1,0.2,1.0\n0.3,0.4,2.0\n";
    }
    std::vector<std::string> warnings;
    const PoolProblem deduped = load_pool(path, 2, 1, &warnings);
    CHECK(deduped.size() == 2);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("duplicate") != std::string::npos);

    std::remove(path.c_str());
    CHECK_THROWS_AS(load_pool(path, 2, 1), std::runtime_error);
}

TEST_CASE("duplicate candidate features with distinct outcomes are rejected") {
    Eigen::MatrixXd candidates(2, 2), outcomes(2, 1);
    candidates << 1.0, 2.0, 1.0, 2.0;
    outcomes << 0.5, 0.9;
    CHECK_THROWS_AS(PoolProblem("p", candidates, outcomes, 0.0), std::invalid_argument);
}

TEST_CASE("query adds calibrated independent noise per output") {
    const ContinuousProblem problem = make_multi_output_plus(0.5);
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(6, 0.5);
    const Eigen::VectorXd truth = problem.evaluate(x);

    Rng rng(99);
    const int draws = 10000;
    std::vector<double> e0, e1;
    double cross = 0.0;
    for (int s = 0; s < draws; ++s) {
        const QueryResult q = problem.query(x, rng);
        CHECK(q.noiseless == truth);
        e0.push_back(q.noisy[0] - truth[0]);
        e1.push_back(q.noisy[1] - truth[1]);
        cross += e0.back() * e1.back();
    }
    const auto m0 = oracle::moments(e0);
    const auto m1 = oracle::moments(e1);
    CHECK(std::sqrt(m0.variance) == doctest::Approx(0.5).epsilon(0.03));
    CHECK(std::sqrt(m1.variance) == doctest::Approx(0.5).epsilon(0.03));
    const double corr = cross / draws / (std::sqrt(m0.variance) * std::sqrt(m1.variance));
    CHECK(std::abs(corr) < 0.05);

    // zero noise is exact
    const ContinuousProblem exact = make_multi_output_plus(0.0);
    const QueryResult q = exact.query(x, rng);
    CHECK(q.noisy == q.noiseless);
}

TEST_CASE("pool queries return the hidden row plus noise and never mutate features") {
    Eigen::MatrixXd candidates(3, 2), outcomes(3, 2);
    candidates << 0, 0, 1, 0, 0, 1;
    outcomes << 1, 2, 3, 4, 5, 6;
    PoolProblem pool("p", candidates, outcomes, 0.0);
    Rng rng(1);
    for (int i = 0; i < 3; ++i) {
        const QueryResult q = pool.query(i, rng);
        CHECK(q.noisy == outcomes.row(i).transpose());
    }
    CHECK(pool.candidates() == candidates);
    CHECK_THROWS_AS(pool.query(3, rng), std::invalid_argument);
}

TEST_CASE("default noise level is one percent of the outcome spread") {
    const Problem problem(make_ackley(3, 0.0));
    const double noise = default_noise_std(problem);
    CHECK(noise > 0.0);
    const RangeSpec range = estimate_outcome_range(problem);
    const double width = range.ranges[0].second - range.ranges[0].first;
    CHECK(noise < width);  // sanity: 1% of std is far below the full range
    // the factory applies it when asked for the default
    const ContinuousProblem with_default = make_ackley(3, -1.0);
    CHECK(with_default.noise_std() == doctest::Approx(noise));
}
