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

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beacon/config.hpp"
#include "beacon/report.hpp"
#include "beacon/runner.hpp"
#include "beacon/trace.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

int cmd_run(const std::string& config_path, std::int64_t seed_override, int replicates_override,
            const std::string& output_override, int jobs) {
    beacon::ExperimentConfig config;
    try {
        config = beacon::load_config_file(config_path);
    } catch (const beacon::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
    }
    if (seed_override >= 0) config.base_seed = static_cast<std::uint64_t>(seed_override);
    if (replicates_override > 0) config.replicates = replicates_override;
    if (!output_override.empty()) config.output_dir = output_override;

    try {
        const beacon::RunSummary summary = beacon::run_experiment(config, jobs, std::cerr);
        int completed = 0, skipped = 0;
        for (const auto& outcome : summary.outcomes) {
            if (outcome.skipped) {
                ++skipped;
            } else if (outcome.ok) {
                ++completed;
            }
        }
        std::cerr << "completed " << completed << " replicates, skipped " << skipped
                  << " existing, " << summary.failures << " failed\n";
        return summary.failures == 0 ? kExitOk : kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_report(const std::string& trace_dir, std::string output_dir) {
    if (output_dir.empty()) output_dir = trace_dir;
    try {
        std::vector<beacon::RunTrace> traces;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(trace_dir)) {
            if (entry.path().extension() == ".trace") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) traces.push_back(beacon::read_trace(file.string()));
        if (traces.empty()) {
            std::cerr << "no .trace files in " << trace_dir << "\n";
            return kExitRuntime;
        }
        const beacon::AggregateReport report = beacon::aggregate(traces);
        fs::create_directories(output_dir);
        const std::string csv = (fs::path(output_dir) / "report.csv").string();
        const std::string svg = (fs::path(output_dir) / "report.svg").string();
        beacon::write_report_csv(csv, report);
        beacon::write_report_svg(svg, report);
        std::cerr << "wrote " << csv << " and " << svg << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "report failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_validate(const std::string& config_path) {
    try {
        beacon::load_config_file(config_path);
        std::cout << "OK\n";
        return kExitOk;
    } catch (const beacon::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitValidation;
    }
}

int cmd_list_problems() {
    for (const auto& [name, description] : beacon::builtin_problems()) {
        std::cout << name << "  -  " << description << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"beacon: novelty-search experiments with GP surrogates"};
    app.require_subcommand(1);

    std::string config_path, trace_dir, output_dir;
    std::int64_t seed_override = -1;
    int replicates_override = 0;
    int jobs = 0;

    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "experiment config (JSON)")->required();
    run->add_option("--seed", seed_override, "override base_seed");
    run->add_option("--replicates", replicates_override, "override replicate count");
    run->add_option("--output", output_dir, "override output directory");
    run->add_option("--jobs", jobs, "worker pool size (default: hardware concurrency)");

    auto* report = app.add_subcommand("report", "aggregate traces into CSV + SVG");
    report->add_option("trace-dir", trace_dir, "directory of .trace files")->required();
    report->add_option("--output", output_dir, "output directory (default: trace dir)");

    auto* validate = app.add_subcommand("validate", "validate a config without running");
    validate->add_option("config", config_path, "experiment config (JSON)")->required();

    app.add_subcommand("list-problems", "list built-in problems");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints usage/help
        return e.get_name() == "CallForHelp" ? kExitOk : kExitValidation;
    }

    if (run->parsed()) {
        return cmd_run(config_path, seed_override, replicates_override, output_dir, jobs);
    }
    if (report->parsed()) return cmd_report(trace_dir, output_dir);
    if (validate->parsed()) return cmd_validate(config_path);
    return cmd_list_problems();
}
