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

#include "beacon/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace beacon {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& context) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) {
            throw ConfigError("unknown key '" + key + "' in " + context);
        }
    }
}

template <typename T>
T require(const json& obj, const std::string& key, const std::string& context) {
    if (!obj.contains(key)) throw ConfigError("missing key '" + key + "' in " + context);
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for key '" + key + "' in " + context);
    }
}

template <typename T>
T optional_or(const json& obj, const std::string& key, const std::string& context, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for key '" + key + "' in " + context);
    }
}

double parse_noise(const json& obj, const std::string& context) {
    if (!obj.contains("noise_std")) return -1.0;  // auto
    const auto& v = obj.at("noise_std");
    if (v.is_string()) {
        if (v.get<std::string>() == "auto") return -1.0;
        throw ConfigError("bad value for key 'noise_std' in " + context +
                          " (expected number or \"auto\")");
    }
    if (!v.is_number()) throw ConfigError("bad value for key 'noise_std' in " + context);
    const double noise = v.get<double>();
    if (noise < 0.0) throw ConfigError("'noise_std' must be >= 0 in " + context);
    return noise;
}

ProblemSpec parse_problem(const json& obj) {
    const std::string context = "problem";
    if (!obj.is_object()) throw ConfigError("'problem' must be an object");
    ProblemSpec spec;
    spec.name = require<std::string>(obj, "name", context);
    if (spec.name == "ackley" || spec.name == "rosenbrock" || spec.name == "styblinski-tang") {
        reject_unknown_keys(obj, {"name", "dimension", "noise_std"}, context);
        spec.dimension = require<int>(obj, "dimension", context);
        if (spec.dimension < 1) throw ConfigError("'dimension' must be >= 1 in " + context);
        spec.noise_std = parse_noise(obj, context);
    } else if (spec.name == "multi-output-plus") {
        reject_unknown_keys(obj, {"name", "noise_std"}, context);
        spec.dimension = 6;
        spec.noise_std = parse_noise(obj, context);
    } else if (spec.name == "pool") {
        reject_unknown_keys(obj, {"name", "path", "input_dim", "outcome_dim", "noise_std"}, context);
        spec.pool_path = require<std::string>(obj, "path", context);
        spec.pool_input_dim = require<int>(obj, "input_dim", context);
        spec.pool_outcome_dim = require<int>(obj, "outcome_dim", context);
        if (spec.pool_input_dim < 1 || spec.pool_outcome_dim < 1) {
            throw ConfigError("'input_dim'/'outcome_dim' must be >= 1 in " + context);
        }
        spec.noise_std = parse_noise(obj, context);
        if (spec.noise_std < 0.0) spec.noise_std = 0.0;  // pools default to exact lookups
    } else {
        throw ConfigError("unknown problem name '" + spec.name + "' in " + context);
    }
    return spec;
}

SpaceSpec parse_space(const json& obj) {
    const std::string context = "space";
    if (!obj.is_object()) throw ConfigError("'space' must be an object");
    reject_unknown_keys(obj, {"bins_per_dim", "range"}, context);
    SpaceSpec spec;
    spec.bins_per_dim = require<std::vector<int>>(obj, "bins_per_dim", context);
    if (spec.bins_per_dim.empty()) throw ConfigError("'bins_per_dim' must be non-empty in " + context);
    for (int b : spec.bins_per_dim) {
        if (b < 1) throw ConfigError("'bins_per_dim' entries must be >= 1 in " + context);
    }
    if (obj.contains("range")) {
        const auto& r = obj.at("range");
        if (r.is_string()) {
            if (r.get<std::string>() != "auto") {
                throw ConfigError("bad value for key 'range' in " + context);
            }
        } else if (r.is_array()) {
            std::vector<std::pair<double, double>> ranges;
            for (const auto& pair : r) {
                if (!pair.is_array() || pair.size() != 2) {
                    throw ConfigError("'range' entries must be [lo, hi] pairs in " + context);
                }
                ranges.emplace_back(pair[0].get<double>(), pair[1].get<double>());
            }
            spec.range = std::move(ranges);
        } else {
            throw ConfigError("bad value for key 'range' in " + context);
        }
    }
    return spec;
}

DistanceMetric parse_metric(const std::string& name, const std::string& context) {
    if (name == "euclidean") return DistanceMetric::Euclidean;
    if (name == "manhattan") return DistanceMetric::Manhattan;
    throw ConfigError("unknown metric '" + name + "' in " + context);
}

GpConfig parse_gp_config(const json& obj, const std::string& context) {
    GpConfig gp;
    if (obj.contains("kernel")) {
        try {
            gp.family = kernel_family_from_string(obj.at("kernel").get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string(e.what()) + " in " + context);
        }
    }
    gp.hyper_restarts = optional_or<int>(obj, "hyper_restarts", context, gp.hyper_restarts);
    gp.hyper_refit_every = optional_or<int>(obj, "hyper_refit_every", context, gp.hyper_refit_every);
    gp.identity_coupling = optional_or<bool>(obj, "identity_coupling", context, gp.identity_coupling);
    gp.noise_floor = optional_or<double>(obj, "noise_floor", context, gp.noise_floor);
    if (gp.hyper_restarts < 1) throw ConfigError("'hyper_restarts' must be >= 1 in " + context);
    if (gp.hyper_refit_every < 1) throw ConfigError("'hyper_refit_every' must be >= 1 in " + context);
    if (gp.noise_floor <= 0.0) throw ConfigError("'noise_floor' must be > 0 in " + context);
    return gp;
}

AlgorithmEntry parse_algorithm(const json& obj, std::size_t index) {
    const std::string context = "algorithms[" + std::to_string(index) + "]";
    if (!obj.is_object()) throw ConfigError(context + " must be an object");
    AlgorithmEntry entry;
    entry.name = require<std::string>(obj, "name", context);
    entry.label = optional_or<std::string>(obj, "label", context, entry.name);

    const std::set<std::string> gp_keys = {"kernel", "hyper_restarts", "hyper_refit_every",
                                           "identity_coupling", "noise_floor"};
    if (entry.name == "beacon" || entry.name == "ug-beacon") {
        std::set<std::string> allowed = {"name", "label", "k", "metric", "dedup",
                                         "descending_variant", "num_features", "acq_restarts"};
        allowed.insert(gp_keys.begin(), gp_keys.end());
        if (entry.name == "ug-beacon") allowed.insert("forbidden_bins");
        reject_unknown_keys(obj, allowed, context);
        entry.beacon.gp = parse_gp_config(obj, context);
        entry.beacon.novelty.k = optional_or<int>(obj, "k", context, entry.beacon.novelty.k);
        if (obj.contains("metric")) {
            entry.beacon.novelty.metric =
                parse_metric(obj.at("metric").get<std::string>(), context);
        }
        entry.beacon.novelty.dedup =
            optional_or<bool>(obj, "dedup", context, entry.beacon.novelty.dedup);
        entry.beacon.novelty.descending_variant = optional_or<bool>(
            obj, "descending_variant", context, entry.beacon.novelty.descending_variant);
        entry.beacon.num_features =
            optional_or<int>(obj, "num_features", context, entry.beacon.num_features);
        entry.beacon.acq_restarts =
            optional_or<int>(obj, "acq_restarts", context, entry.beacon.acq_restarts);
        if (entry.beacon.novelty.k < 1) throw ConfigError("'k' must be >= 1 in " + context);
        if (entry.beacon.num_features < 1) {
            throw ConfigError("'num_features' must be >= 1 in " + context);
        }
        if (entry.beacon.acq_restarts < 1) {
            throw ConfigError("'acq_restarts' must be >= 1 in " + context);
        }
        if (entry.name == "ug-beacon") {
            const auto bins = require<std::vector<std::int64_t>>(obj, "forbidden_bins", context);
            UgConstraint constraint;
            constraint.forbidden_bins.insert(bins.begin(), bins.end());
            entry.beacon.constraint = std::move(constraint);
        }
    } else if (entry.name == "maxvar") {
        std::set<std::string> allowed = {"name", "label", "acq_restarts"};
        allowed.insert(gp_keys.begin(), gp_keys.end());
        reject_unknown_keys(obj, allowed, context);
        entry.maxvar_gp = parse_gp_config(obj, context);
        entry.maxvar_restarts = optional_or<int>(obj, "acq_restarts", context, entry.maxvar_restarts);
        if (entry.maxvar_restarts < 1) throw ConfigError("'acq_restarts' must be >= 1 in " + context);
    } else if (entry.name == "ns-ea") {
        reject_unknown_keys(obj, {"name", "label", "population_size", "mutation_scale", "k"},
                            context);
        entry.ea.population_size =
            optional_or<int>(obj, "population_size", context, entry.ea.population_size);
        entry.ea.mutation_scale =
            optional_or<double>(obj, "mutation_scale", context, entry.ea.mutation_scale);
        entry.ea.novelty_k = optional_or<int>(obj, "k", context, entry.ea.novelty_k);
        if (entry.ea.population_size < 2) {
            throw ConfigError("'population_size' must be >= 2 in " + context);
        }
        if (!(entry.ea.mutation_scale > 0.0 && entry.ea.mutation_scale <= 1.0)) {
            throw ConfigError("'mutation_scale' must be in (0, 1] in " + context);
        }
        if (entry.ea.novelty_k < 1) throw ConfigError("'k' must be >= 1 in " + context);
    } else if (entry.name == "rs" || entry.name == "sobol") {
        reject_unknown_keys(obj, {"name", "label"}, context);
    } else {
        throw ConfigError("unknown algorithm name '" + entry.name + "' in " + context);
    }
    return entry;
}

json algorithm_to_json(const AlgorithmEntry& entry) {
    json obj;
    obj["name"] = entry.name;
    obj["label"] = entry.label;
    if (entry.name == "beacon" || entry.name == "ug-beacon") {
        obj["kernel"] = to_string(entry.beacon.gp.family);
        obj["hyper_restarts"] = entry.beacon.gp.hyper_restarts;
        obj["hyper_refit_every"] = entry.beacon.gp.hyper_refit_every;
        obj["identity_coupling"] = entry.beacon.gp.identity_coupling;
        obj["noise_floor"] = entry.beacon.gp.noise_floor;
        obj["k"] = entry.beacon.novelty.k;
        obj["metric"] =
            entry.beacon.novelty.metric == DistanceMetric::Euclidean ? "euclidean" : "manhattan";
        obj["dedup"] = entry.beacon.novelty.dedup;
        obj["descending_variant"] = entry.beacon.novelty.descending_variant;
        obj["num_features"] = entry.beacon.num_features;
        obj["acq_restarts"] = entry.beacon.acq_restarts;
        if (entry.beacon.constraint.has_value()) {
            std::vector<std::int64_t> bins(entry.beacon.constraint->forbidden_bins.begin(),
                                           entry.beacon.constraint->forbidden_bins.end());
            std::sort(bins.begin(), bins.end());
            obj["forbidden_bins"] = bins;
        }
    } else if (entry.name == "maxvar") {
        obj["kernel"] = to_string(entry.maxvar_gp.family);
        obj["hyper_restarts"] = entry.maxvar_gp.hyper_restarts;
        obj["hyper_refit_every"] = entry.maxvar_gp.hyper_refit_every;
        obj["identity_coupling"] = entry.maxvar_gp.identity_coupling;
        obj["noise_floor"] = entry.maxvar_gp.noise_floor;
        obj["acq_restarts"] = entry.maxvar_restarts;
    } else if (entry.name == "ns-ea") {
        obj["population_size"] = entry.ea.population_size;
        obj["mutation_scale"] = entry.ea.mutation_scale;
        obj["k"] = entry.ea.novelty_k;
    }
    return obj;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");
    reject_unknown_keys(root,
                        {"problem", "space", "algorithms", "T", "n_init", "replicates",
                         "base_seed", "output_dir"},
                        "config");

    ExperimentConfig config;
    if (!root.contains("problem")) throw ConfigError("missing key 'problem' in config");
    config.problem = parse_problem(root.at("problem"));
    if (!root.contains("space")) throw ConfigError("missing key 'space' in config");
    config.space = parse_space(root.at("space"));

    if (!root.contains("algorithms") || !root.at("algorithms").is_array() ||
        root.at("algorithms").empty()) {
        throw ConfigError("'algorithms' must be a non-empty array in config");
    }
    std::set<std::string> labels;
    for (std::size_t i = 0; i < root.at("algorithms").size(); ++i) {
        AlgorithmEntry entry = parse_algorithm(root.at("algorithms")[i], i);
        if (!labels.insert(entry.label).second) {
            throw ConfigError("duplicate algorithm label '" + entry.label +
                              "' (set a unique 'label' per entry)");
        }
        config.algorithms.push_back(std::move(entry));
    }

    config.T = require<int>(root, "T", "config");
    config.n_init = optional_or<int>(root, "n_init", "config", 10);
    config.replicates = optional_or<int>(root, "replicates", "config", 20);
    config.base_seed = optional_or<std::uint64_t>(root, "base_seed", "config", 0);
    config.output_dir = require<std::string>(root, "output_dir", "config");
    if (config.T < 1) throw ConfigError("'T' must be >= 1 in config");
    if (config.n_init < 1) throw ConfigError("'n_init' must be >= 1 in config");
    if (config.replicates < 1) throw ConfigError("'replicates' must be >= 1 in config");
    return config;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open config file " + path);
    std::stringstream buffer;
    buffer << file.rdbuf();
    return parse_config_json(buffer.str());
}

std::string canonical_config_json(const ExperimentConfig& config) {
    json root;
    json problem;
    problem["name"] = config.problem.name;
    if (config.problem.name == "pool") {
        problem["path"] = config.problem.pool_path;
        problem["input_dim"] = config.problem.pool_input_dim;
        problem["outcome_dim"] = config.problem.pool_outcome_dim;
    } else {
        problem["dimension"] = config.problem.dimension;
    }
    problem["noise_std"] = config.problem.noise_std;
    root["problem"] = std::move(problem);

    json space;
    space["bins_per_dim"] = config.space.bins_per_dim;
    if (config.space.range.has_value()) {
        json ranges = json::array();
        for (const auto& [lo, hi] : *config.space.range) ranges.push_back({lo, hi});
        space["range"] = std::move(ranges);
    } else {
        space["range"] = "auto";
    }
    root["space"] = std::move(space);

    json algorithms = json::array();
    for (const auto& entry : config.algorithms) algorithms.push_back(algorithm_to_json(entry));
    root["algorithms"] = std::move(algorithms);
    root["T"] = config.T;
    root["n_init"] = config.n_init;
    return root.dump();
}

std::uint64_t ExperimentConfig::hash() const {
    const std::string canonical = canonical_config_json(*this);
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (const unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Problem build_problem(const ProblemSpec& spec) {
    if (spec.name == "ackley") return Problem(make_ackley(spec.dimension, spec.noise_std));
    if (spec.name == "rosenbrock") return Problem(make_rosenbrock(spec.dimension, spec.noise_std));
    if (spec.name == "styblinski-tang") {
        return Problem(make_styblinski_tang(spec.dimension, spec.noise_std));
    }
    if (spec.name == "multi-output-plus") return Problem(make_multi_output_plus(spec.noise_std));
    if (spec.name == "pool") {
        std::vector<std::string> warnings;
        PoolProblem pool = load_pool(spec.pool_path, spec.pool_input_dim, spec.pool_outcome_dim,
                                     &warnings, std::max(spec.noise_std, 0.0));
        Problem problem(std::move(pool));
        return problem;
    }
    throw ConfigError("unknown problem name '" + spec.name + "'");
}

BehaviorSpace build_space(const Problem& problem, const SpaceSpec& spec) {
    std::optional<RangeSpec> range;
    if (spec.range.has_value()) {
        RangeSpec r;
        r.provenance = RangeSpec::Provenance::Analytic;
        r.ranges = *spec.range;
        range = std::move(r);
    }
    return make_space(problem, spec.bins_per_dim, range);
}

std::unique_ptr<SearchAlgorithm> build_algorithm(const AlgorithmEntry& entry,
                                                 const BehaviorSpace& space) {
    if (entry.name == "beacon" || entry.name == "ug-beacon") {
        return std::make_unique<BeaconSearch>(space, entry.beacon);
    }
    if (entry.name == "rs") return std::make_unique<RandomSearch>();
    if (entry.name == "sobol") return std::make_unique<SobolSearch>();
    if (entry.name == "maxvar") {
        return std::make_unique<MaxVarSearch>(space, entry.maxvar_gp, entry.maxvar_restarts);
    }
    if (entry.name == "ns-ea") return std::make_unique<NsEaSearch>(entry.ea);
    throw ConfigError("unknown algorithm name '" + entry.name + "'");
}

const std::vector<std::pair<std::string, std::string>>& builtin_problems() {
    static const std::vector<std::pair<std::string, std::string>> problems = {
        {"ackley", "Ackley function (a=20, b=0.2, c=2pi) on [-32.768, 32.768]^d, 1 outcome"},
        {"rosenbrock", "Rosenbrock function on [-5, 10]^d, 1 outcome"},
        {"styblinski-tang", "Styblinski-Tang function on [-5, 5]^d, 1 outcome"},
        {"multi-output-plus", "2-output plus/cross-shaped function on [-5, 5]^6"},
        {"pool", "discrete candidate pool from a CSV file (x1..xd,y1..yn header)"},
    };
    return problems;
}

}  // namespace beacon
