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

#include "beacon/runner.hpp"

#include <atomic>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <thread>

#include "beacon/trace.hpp"

namespace beacon {

namespace fs = std::filesystem;

std::string trace_filename(const std::string& label, int replicate) {
    std::string safe = label;
    for (char& c : safe) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) c = '_';
    }
    return safe + "_rep" + std::to_string(replicate) + ".trace";
}

RunSummary run_experiment(const ExperimentConfig& config, int jobs, std::ostream& log) {
    const Problem problem = build_problem(config.problem);
    const BehaviorSpace space = build_space(problem, config.space);
    const std::uint64_t config_hash = config.hash();

    fs::create_directories(config.output_dir);

    struct Task {
        const AlgorithmEntry* entry;
        int replicate;
        fs::path path;
    };
    std::vector<Task> tasks;
    RunSummary summary;
    for (const auto& entry : config.algorithms) {
        for (int r = 0; r < config.replicates; ++r) {
            const fs::path path = fs::path(config.output_dir) / trace_filename(entry.label, r);
            if (fs::exists(path)) {
                ReplicateOutcome outcome;
                outcome.label = entry.label;
                outcome.replicate = r;
                outcome.ok = true;
                outcome.skipped = true;
                summary.outcomes.push_back(std::move(outcome));
                continue;
            }
            tasks.push_back({&entry, r, path});
        }
    }

    std::mutex mutex;
    std::atomic<std::size_t> next{0};
    int workers = jobs > 0 ? jobs : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min<int>(workers, std::max<std::size_t>(tasks.size(), 1));

    const auto worker = [&]() {
        while (true) {
            const std::size_t index = next.fetch_add(1);
            if (index >= tasks.size()) return;
            const Task& task = tasks[index];

            ReplicateOutcome outcome;
            outcome.label = task.entry->label;
            outcome.replicate = task.replicate;
            try {
                auto algorithm = build_algorithm(*task.entry, space);
                RunConfig run;
                run.T = config.T;
                run.n_init = config.n_init;
                run.seed = config.base_seed + static_cast<std::uint64_t>(task.replicate);
                RunTrace trace = run_replicate(*algorithm, problem, space, run);
                trace.algorithm = task.entry->label;
                trace.config_hash = config_hash;
                outcome.wall_time_sec = trace.wall_time_sec;
                if (!trace.error.empty()) {
                    outcome.error = trace.error;
                    // Keep the partial trace for inspection without blocking a
                    // retry on resume.
                    write_trace(task.path.string() + ".failed", trace);
                } else {
                    const std::string tmp = task.path.string() + ".tmp";
                    write_trace(tmp, trace);
                    fs::rename(tmp, task.path);
                    outcome.ok = true;
                }
            } catch (const std::exception& e) {
                outcome.error = e.what();
            }

            std::lock_guard<std::mutex> lock(mutex);
            log << (outcome.ok ? "done " : "FAIL ") << outcome.label << " replicate "
                << outcome.replicate;
            if (outcome.ok) {
                log << " (" << outcome.wall_time_sec << " s)";
            } else {
                log << ": " << outcome.error;
            }
            log << std::endl;
            summary.outcomes.push_back(std::move(outcome));
        }
    };

    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (const auto& outcome : summary.outcomes) {
        if (!outcome.ok) ++summary.failures;
    }
    return summary;
}

}  // namespace beacon
