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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "beacon/config.hpp"
#include "beacon/report.hpp"
#include "beacon/runner.hpp"
#include "beacon/trace.hpp"

using namespace beacon;
namespace fs = std::filesystem;

namespace {

std::string scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

std::string minimal_config(const std::string& outdir) {
    return R"({
      "problem": {"name": "styblinski-tang", "dimension": 2, "noise_std": 0.0},
      "space": {"bins_per_dim": [6], "range": "auto"},
      "algorithms": [{"name": "rs"}, {"name": "sobol"}],
      "T": 5,
      "n_init": 3,
      "replicates": 2,
      "base_seed": 11,
      "output_dir": ")" + outdir + R"("
    })";
}

std::string read_file(const std::string& path) {
    std::ifstream file(path);
    std::stringstream ss;
    ss << file.rdbuf();
    return ss.str();
}

// Minimal well-formedness scan: tags balance and no stray '&' or '<'.
bool xml_well_formed(const std::string& text) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    if (text.rfind("<?xml", 0) != 0) return false;
    i = text.find("?>");
    if (i == std::string::npos) return false;
    i += 2;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '&') {
            static const char* entities[] = {"&amp;", "&lt;", "&gt;", "&quot;", "&apos;"};
            bool ok = false;
            for (const char* e : entities) {
                if (text.compare(i, std::string(e).size(), e) == 0) ok = true;
            }
            if (!ok) return false;
            ++i;
            continue;
        }
        if (c != '<') {
            ++i;
            continue;
        }
        const std::size_t end = text.find('>', i);
        if (end == std::string::npos) return false;
        std::string tag = text.substr(i + 1, end - i - 1);
        i = end + 1;
        if (tag.empty()) return false;
        if (tag[0] == '/') {
            if (stack.empty()) return false;
            if (stack.back() != tag.substr(1)) return false;
            stack.pop_back();
            continue;
        }
        if (tag.back() == '/') continue;  // self-closing
        const std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
        stack.push_back(name);
    }
    return stack.empty();
}

}  // namespace

TEST_CASE("config parsing applies defaults and rejects unknown keys by name") {
    const ExperimentConfig config = parse_config_json(minimal_config("/tmp/x"));
    CHECK(config.problem.name == "styblinski-tang");
    CHECK(config.T == 5);
    CHECK(config.replicates == 2);
    CHECK(config.algorithms.size() == 2);
    CHECK(config.algorithms[0].label == "rs");

    CHECK_THROWS_WITH_AS(parse_config_json(R"({"problem": {"name": "ackley", "dimension": 2},
        "space": {"bins_per_dim": [5]}, "algorithms": [{"name": "rs"}],
        "T": 5, "output_dir": "o", "bogus_key": 1})"),
                         doctest::Contains("bogus_key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_json(R"({"problem": {"name": "ackley", "dimension": 2,
        "extra": true}, "space": {"bins_per_dim": [5]}, "algorithms": [{"name": "rs"}],
        "T": 5, "output_dir": "o"})"),
                         doctest::Contains("extra"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_json(R"({"space": {"bins_per_dim": [5]},
        "algorithms": [{"name": "rs"}], "T": 5, "output_dir": "o"})"),
                         doctest::Contains("problem"), ConfigError);
    CHECK_THROWS_AS(parse_config_json("not json at all"), ConfigError);
    // duplicate labels are ambiguous
    CHECK_THROWS_WITH_AS(parse_config_json(R"({"problem": {"name": "ackley", "dimension": 2},
        "space": {"bins_per_dim": [5]}, "algorithms": [{"name": "rs"}, {"name": "rs"}],
        "T": 5, "output_dir": "o"})"),
                         doctest::Contains("label"), ConfigError);
}

TEST_CASE("ug-beacon config requires forbidden bins; beacon knobs parse") {
    const std::string text = R"({
      "problem": {"name": "ackley", "dimension": 2, "noise_std": 0.1},
      "space": {"bins_per_dim": [25]},
      "algorithms": [
        {"name": "beacon", "k": 7, "metric": "manhattan", "dedup": false,
         "num_features": 256, "acq_restarts": 4, "kernel": "squared-exponential",
         "hyper_restarts": 3, "hyper_refit_every": 5},
        {"name": "ug-beacon", "forbidden_bins": [1, 3, 5]},
        {"name": "ns-ea", "population_size": 12, "mutation_scale": 0.2, "k": 4},
        {"name": "maxvar", "acq_restarts": 6}
      ],
      "T": 10, "output_dir": "o"
    })";
    const ExperimentConfig config = parse_config_json(text);
    CHECK(config.algorithms[0].beacon.novelty.k == 7);
    CHECK(config.algorithms[0].beacon.novelty.metric == DistanceMetric::Manhattan);
    CHECK(config.algorithms[0].beacon.gp.family == KernelFamily::SquaredExponentialArd);
    CHECK(config.algorithms[0].beacon.gp.hyper_refit_every == 5);
    REQUIRE(config.algorithms[1].beacon.constraint.has_value());
    CHECK(config.algorithms[1].beacon.constraint->forbidden_bins.count(3) == 1);
    CHECK(config.algorithms[2].ea.population_size == 12);
    CHECK(config.algorithms[3].maxvar_restarts == 6);

    CHECK_THROWS_WITH_AS(parse_config_json(R"({"problem": {"name": "ackley", "dimension": 2},
        "space": {"bins_per_dim": [5]}, "algorithms": [{"name": "ug-beacon"}],
        "T": 5, "output_dir": "o"})"),
                         doctest::Contains("forbidden_bins"), ConfigError);
}

TEST_CASE("run_experiment writes one trace per (algorithm, replicate) and resumes") {
    const std::string outdir = scratch_dir("beacon_harness_run");
    const ExperimentConfig config = parse_config_json(minimal_config(outdir));
    std::ostringstream log;
    const RunSummary summary = run_experiment(config, 2, log);
    CHECK(summary.failures == 0);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(outdir)) {
        if (entry.path().extension() == ".trace") files.push_back(entry.path());
    }
    CHECK(files.size() == 4);  // 2 algorithms x 2 replicates

    // byte-identical rerun
    const fs::path probe = fs::path(outdir) / trace_filename("rs", 0);
    const std::string before = read_file(probe.string());
    fs::remove(probe);
    std::ostringstream log2;
    const RunSummary resumed = run_experiment(config, 1, log2);
    CHECK(resumed.failures == 0);
    int skipped = 0, redone = 0;
    for (const auto& outcome : resumed.outcomes) {
        if (outcome.skipped) ++skipped;
        else ++redone;
    }
    CHECK(skipped == 3);  // only the deleted trace is regenerated
    CHECK(redone == 1);
    CHECK(read_file(probe.string()) == before);
}

TEST_CASE("trace files round-trip through read_trace") {
    const std::string outdir = scratch_dir("beacon_harness_roundtrip");
    const ExperimentConfig config = parse_config_json(minimal_config(outdir));
    std::ostringstream log;
    run_experiment(config, 2, log);

    const RunTrace trace = read_trace((fs::path(outdir) / trace_filename("sobol", 1)).string());
    CHECK(trace.algorithm == "sobol");
    CHECK(trace.seed == 12);  // base_seed + replicate
    CHECK(trace.config_hash == config.hash());
    CHECK(static_cast<int>(trace.rows.size()) == config.n_init + config.T);
    CHECK(trace.rows.back().reachability > 0.0);
    CHECK(trace.error.empty());
}

TEST_CASE("aggregate computes replicate means and unbiased deviations") {
    RunTrace a;
    a.algorithm = "rs";
    a.n_init = 1;
    a.T = 1;
    a.config_hash = 5;
    TraceRow r1;
    r1.iteration = 1;
    r1.reachability = 0.4;
    TraceRow r2 = r1;
    r2.iteration = 2;
    r2.reachability = 0.4;
    a.rows = {r1, r2};
    RunTrace b = a;
    b.rows[1].reachability = 0.6;

    const AggregateReport identical = aggregate({a, a});
    CHECK(identical.series[0].std_reach[0] == doctest::Approx(0.0));
    CHECK(identical.series[0].std_reach[1] == doctest::Approx(0.0));

    const AggregateReport mixed = aggregate({a, b});
    CHECK(mixed.series[0].mean_reach[1] == doctest::Approx(0.5));
    CHECK(mixed.series[0].std_reach[1] == doctest::Approx(0.1414213562).epsilon(1e-6));

    RunTrace other = b;
    other.config_hash = 6;
    CHECK_THROWS_WITH_AS(aggregate({a, other}), doctest::Contains("config hash"),
                         std::invalid_argument);
}

TEST_CASE("report CSV matches the aggregate and the SVG is well-formed") {
    const std::string outdir = scratch_dir("beacon_harness_report");
    const ExperimentConfig config = parse_config_json(minimal_config(outdir));
    std::ostringstream log;
    run_experiment(config, 2, log);

    std::vector<RunTrace> traces;
    for (const auto& entry : fs::directory_iterator(outdir)) {
        if (entry.path().extension() == ".trace") traces.push_back(read_trace(entry.path().string()));
    }
    const AggregateReport report = aggregate(traces);

    const std::string csv_path = (fs::path(outdir) / "report.csv").string();
    const std::string svg_path = (fs::path(outdir) / "report.svg").string();
    write_report_csv(csv_path, report);
    write_report_svg(svg_path, report);

    // row count = |algorithms| x (n_init + T), plus header
    std::ifstream csv(csv_path);
    std::string line;
    std::getline(csv, line);
    CHECK(line == "algorithm,iteration,mean_reach,std_reach");
    int rows = 0;
    double mean_sum = 0.0;
    std::vector<std::array<double, 2>> parsed;
    while (std::getline(csv, line)) {
        ++rows;
        std::stringstream ss(line);
        std::string cell;
        std::getline(ss, cell, ',');
        std::getline(ss, cell, ',');
        std::getline(ss, cell, ',');
        const double mean = std::stod(cell);
        std::getline(ss, cell, ',');
        const double sd = std::stod(cell);
        parsed.push_back({mean, sd});
        mean_sum += mean;
    }
    CHECK(rows == 2 * (config.n_init + config.T));
    std::size_t i = 0;
    for (const auto& series : report.series) {
        for (std::size_t t = 0; t < series.mean_reach.size(); ++t, ++i) {
            CHECK(std::abs(parsed[i][0] - series.mean_reach[t]) < 1e-6);
            CHECK(std::abs(parsed[i][1] - series.std_reach[t]) < 1e-6);
        }
    }
    CHECK(mean_sum > 0.0);

    CHECK(xml_well_formed(read_file(svg_path)));

    // deterministic CSV across reruns of the same aggregate
    const std::string again = csv_path + ".again";
    write_report_csv(again, report);
    CHECK(read_file(csv_path) == read_file(again));
}

TEST_CASE("replicate failures are recorded while the rest continue") {
    const std::string outdir = scratch_dir("beacon_harness_failures");
    // 4-candidate pool cannot supply n_init + T = 3 + 5 queries.
    Eigen::MatrixXd candidates(4, 1), outcomes(4, 1);
    candidates << 0.0, 0.25, 0.5, 0.75;
    outcomes << 0.0, 1.0, 2.0, 3.0;
    const std::string pool_path = outdir + "/small_pool.csv";
    write_pool_csv(pool_path, candidates, outcomes);

    const std::string text = R"({
      "problem": {"name": "pool", "path": ")" + pool_path + R"(",
                  "input_dim": 1, "outcome_dim": 1, "noise_std": 0},
      "space": {"bins_per_dim": [4]},
      "algorithms": [{"name": "rs"}],
      "T": 5, "n_init": 3, "replicates": 2, "output_dir": ")" + outdir + R"("})";
    const ExperimentConfig config = parse_config_json(text);
    std::ostringstream log;
    const RunSummary summary = run_experiment(config, 1, log);
    CHECK(summary.failures == 2);
    int failed_files = 0;
    for (const auto& entry : fs::directory_iterator(outdir)) {
        if (entry.path().extension() == ".failed") ++failed_files;
    }
    CHECK(failed_files == 2);  // partial traces kept for inspection
    for (const auto& outcome : summary.outcomes) {
        CHECK(!outcome.ok);
        CHECK(outcome.error.find("exhausted") != std::string::npos);
    }
}

TEST_CASE("config hash ignores replicate count but tracks the science") {
    ExperimentConfig a = parse_config_json(minimal_config("/tmp/a"));
    ExperimentConfig b = a;
    b.replicates = 99;
    b.output_dir = "/elsewhere";
    b.base_seed = 123456;
    CHECK(a.hash() == b.hash());
    ExperimentConfig c = a;
    c.T = 6;
    CHECK(a.hash() != c.hash());
    ExperimentConfig d = a;
    d.space.bins_per_dim = {7};
    CHECK(a.hash() != d.hash());
}
