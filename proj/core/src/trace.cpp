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

#include "beacon/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace beacon {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    return v;
}

}  // namespace

void write_trace(const std::string& path, const RunTrace& trace) {
    json meta;
    meta["algorithm"] = trace.algorithm;
    meta["problem"] = trace.problem;
    meta["seed"] = trace.seed;
    meta["config_hash"] = trace.config_hash;
    meta["n_init"] = trace.n_init;
    meta["T"] = trace.T;
    meta["input_dim"] = trace.input_dim;
    meta["outcome_dim"] = trace.outcome_dim;
    meta["bins_per_dim"] = trace.bins_per_dim;
    meta["space_lower"] = vector_to_json(trace.space_lower);
    meta["space_upper"] = vector_to_json(trace.space_upper);
    meta["error"] = trace.error;
    json hyper = json::array();
    for (const auto& rec : trace.hyper_history) {
        json h;
        h["iteration"] = rec.iteration;
        h["kernel"] = rec.kernel_family;
        h["lengthscales"] = vector_to_json(rec.lengthscales);
        h["signal_variance"] = rec.signal_variance;
        h["noise_variance"] = rec.noise_variance;
        json coupling = json::array();
        for (int i = 0; i < rec.task_coupling.rows(); ++i) {
            for (int j = 0; j < rec.task_coupling.cols(); ++j) coupling.push_back(rec.task_coupling(i, j));
        }
        h["task_coupling"] = coupling;
        h["task_dim"] = rec.task_coupling.rows();
        h["log_marginal"] = rec.log_marginal;
        h["refit_failed"] = rec.refit_failed;
        h["degenerate"] = rec.degenerate;
        hyper.push_back(std::move(h));
    }
    meta["hyper_history"] = std::move(hyper);

    std::ofstream file(path);
    if (!file) throw std::runtime_error("write_trace: cannot open " + path);
    file << meta.dump() << "\n";
    for (const auto& row : trace.rows) {
        file << row.iteration << "," << row.pool_index << "," << row.predicted_bin << ","
             << (row.constraint_fallback ? 1 : 0) << "," << row.bin << "," << row.bin_noisy << ","
             << row.distinct_bins << "," << fmt(row.reachability);
        for (int i = 0; i < row.input.size(); ++i) file << "," << fmt(row.input[i]);
        for (int i = 0; i < row.noisy_outcome.size(); ++i) file << "," << fmt(row.noisy_outcome[i]);
        for (int i = 0; i < row.noiseless_outcome.size(); ++i) {
            file << "," << fmt(row.noiseless_outcome[i]);
        }
        file << "\n";
    }
    if (!file.good()) throw std::runtime_error("write_trace: write failed for " + path);
}

RunTrace read_trace(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("read_trace: cannot open " + path);
    std::string line;
    if (!std::getline(file, line)) throw std::runtime_error("read_trace: empty file " + path);

    RunTrace trace;
    json meta = json::parse(line);
    trace.algorithm = meta.at("algorithm").get<std::string>();
    trace.problem = meta.at("problem").get<std::string>();
    trace.seed = meta.at("seed").get<std::uint64_t>();
    trace.config_hash = meta.at("config_hash").get<std::uint64_t>();
    trace.n_init = meta.at("n_init").get<int>();
    trace.T = meta.at("T").get<int>();
    trace.input_dim = meta.at("input_dim").get<int>();
    trace.outcome_dim = meta.at("outcome_dim").get<int>();
    trace.bins_per_dim = meta.at("bins_per_dim").get<std::vector<int>>();
    trace.space_lower = vector_from_json(meta.at("space_lower"));
    trace.space_upper = vector_from_json(meta.at("space_upper"));
    trace.error = meta.at("error").get<std::string>();
    for (const auto& h : meta.at("hyper_history")) {
        HyperRecord rec;
        rec.iteration = h.at("iteration").get<int>();
        rec.kernel_family = h.at("kernel").get<std::string>();
        rec.lengthscales = vector_from_json(h.at("lengthscales"));
        rec.signal_variance = h.at("signal_variance").get<double>();
        rec.noise_variance = h.at("noise_variance").get<double>();
        const int td = h.at("task_dim").get<int>();
        rec.task_coupling.resize(td, td);
        const auto& coupling = h.at("task_coupling");
        for (int i = 0; i < td; ++i) {
            for (int j = 0; j < td; ++j) rec.task_coupling(i, j) = coupling[i * td + j].get<double>();
        }
        rec.log_marginal = h.at("log_marginal").get<double>();
        rec.refit_failed = h.at("refit_failed").get<bool>();
        rec.degenerate = h.at("degenerate").get<bool>();
        trace.hyper_history.push_back(std::move(rec));
    }

    const int d = trace.input_dim;
    const int n = trace.outcome_dim;
    int line_number = 1;
    while (std::getline(file, line)) {
        ++line_number;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        {
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
        }
        const std::size_t expected = 8 + static_cast<std::size_t>(d) + 2 * n;
        if (cells.size() != expected) {
            throw std::runtime_error("read_trace: " + path + " line " + std::to_string(line_number) +
                                     ": expected " + std::to_string(expected) + " cells, got " +
                                     std::to_string(cells.size()));
        }
        TraceRow row;
        std::size_t c = 0;
        row.iteration = std::stoi(cells[c++]);
        row.pool_index = std::stoi(cells[c++]);
        row.predicted_bin = std::stoll(cells[c++]);
        row.constraint_fallback = cells[c++] == "1";
        row.bin = std::stoll(cells[c++]);
        row.bin_noisy = std::stoll(cells[c++]);
        row.distinct_bins = std::stoll(cells[c++]);
        row.reachability = std::stod(cells[c++]);
        row.input.resize(d);
        for (int i = 0; i < d; ++i) row.input[i] = std::stod(cells[c++]);
        row.noisy_outcome.resize(n);
        for (int i = 0; i < n; ++i) row.noisy_outcome[i] = std::stod(cells[c++]);
        row.noiseless_outcome.resize(n);
        for (int i = 0; i < n; ++i) row.noiseless_outcome[i] = std::stod(cells[c++]);
        trace.rows.push_back(std::move(row));
    }
    return trace;
}

}  // namespace beacon
