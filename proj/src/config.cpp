// Copyright 2026 The cnnga Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cnnga/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <type_traits>

#include "cnnga/errors.hpp"

namespace cnnga {

void RunConfig::validate() const {
  evolution.validate();
  evaluator.validate();
  if (workers < 1) throw ConfigError("workers", "must be at least 1");
  if (out_dir.empty()) throw ConfigError("out_dir", "must not be empty");
  if (input_shape.height < 1 || input_shape.width < 1 || input_shape.channels < 1) {
    throw ConfigError("input_shape", "dimensions must be positive");
  }
  if (num_classes < 2) throw ConfigError("num_classes", "must be at least 2");
  if (!(penalty_fitness >= 0.0 && penalty_fitness <= 1.0)) {
    throw ConfigError("penalty_fitness", "must lie in [0, 1]");
  }
}

std::filesystem::path RunConfig::resolved_cache_path() const {
  return cache_path.empty() ? out_dir / "cache.txt" : cache_path;
}

namespace {

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& known, const std::string& prefix) {
  if (!j.is_object()) {
    throw ConfigError(prefix.empty() ? "<root>" : prefix, "must be a JSON object");
  }
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) throw ConfigError(prefix + item.key(), "unknown key");
  }
}

template <typename T>
void read(const nlohmann::json& j, const char* key, const std::string& name, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    if constexpr (std::is_unsigned_v<T>) {
      if (it->is_number_integer() && !it->is_number_unsigned() && it->get<std::int64_t>() < 0) {
        throw ConfigError(name, "must be non-negative");
      }
    }
    if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) throw ConfigError(name, "must be an integer");
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (!it->is_number()) throw ConfigError(name, "must be a number");
    }
    out = it->get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(name, std::string("wrong type: ") + e.what());
  }
}

EvaluatorKind parse_kind(const std::string& text) {
  if (text == "surrogate") return EvaluatorKind::kSurrogate;
  if (text == "external") return EvaluatorKind::kExternal;
  throw ConfigError("evaluator.kind", "must be \"surrogate\" or \"external\"");
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j) {
  reject_unknown(j,
                 {"population_size", "max_generations", "p_crossover", "p_mutation", "feature_map_set",
                  "init_depth_range", "mutation_weights", "rng_seed", "evaluator", "workers", "out_dir",
                  "cache_path", "input_shape", "num_classes", "penalty_fitness"},
                 "");
  RunConfig c;
  EvolutionConfig& e = c.evolution;
  read(j, "population_size", "population_size", e.population_size);
  read(j, "max_generations", "max_generations", e.max_generations);
  read(j, "p_crossover", "p_crossover", e.p_crossover);
  read(j, "p_mutation", "p_mutation", e.p_mutation);
  read(j, "rng_seed", "rng_seed", e.rng_seed);
  read(j, "feature_map_set", "feature_map_set", e.feature_map_set);
  if (auto it = j.find("init_depth_range"); it != j.end()) {
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number_integer() ||
        !(*it)[1].is_number_integer()) {
      throw ConfigError("init_depth_range", "must be [min, max] integers");
    }
    e.init_depth_min = (*it)[0].get<int>();
    e.init_depth_max = (*it)[1].get<int>();
  }
  if (auto it = j.find("mutation_weights"); it != j.end()) {
    reject_unknown(*it, {"add_skip", "add_pool", "remove", "alter"}, "mutation_weights.");
    read(*it, "add_skip", "mutation_weights.add_skip", e.mutation_weights.add_skip);
    read(*it, "add_pool", "mutation_weights.add_pool", e.mutation_weights.add_pool);
    read(*it, "remove", "mutation_weights.remove", e.mutation_weights.remove);
    read(*it, "alter", "mutation_weights.alter", e.mutation_weights.alter);
  }
  if (auto it = j.find("evaluator"); it != j.end()) {
    reject_unknown(*it, {"kind", "command", "endpoint", "epochs", "dataset", "timeout_seconds"}, "evaluator.");
    std::string kind = "surrogate";
    read(*it, "kind", "evaluator.kind", kind);
    c.evaluator.kind = parse_kind(kind);
    read(*it, "command", "evaluator.command", c.evaluator.command);
    read(*it, "endpoint", "evaluator.endpoint", c.evaluator.endpoint);
    read(*it, "epochs", "evaluator.epochs", c.evaluator.epochs);
    read(*it, "dataset", "evaluator.dataset", c.evaluator.dataset);
    read(*it, "timeout_seconds", "evaluator.timeout_seconds", c.evaluator.timeout_seconds);
  }
  read(j, "workers", "workers", c.workers);
  std::string path;
  if (j.contains("out_dir")) {
    read(j, "out_dir", "out_dir", path);
    c.out_dir = path;
  }
  if (j.contains("cache_path")) {
    path.clear();
    read(j, "cache_path", "cache_path", path);
    c.cache_path = path;
  }
  if (auto it = j.find("input_shape"); it != j.end()) {
    if (!it->is_array() || it->size() != 3 ||
        !std::all_of(it->begin(), it->end(), [](const auto& v) { return v.is_number_integer(); })) {
      throw ConfigError("input_shape", "must be [height, width, channels] integers");
    }
    c.input_shape = {(*it)[0].get<int>(), (*it)[1].get<int>(), (*it)[2].get<int>()};
  }
  read(j, "num_classes", "num_classes", c.num_classes);
  read(j, "penalty_fitness", "penalty_fitness", c.penalty_fitness);
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path.string() + "'");
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ConfigError("config", "'" + path.string() + "' is not valid JSON");
  return run_config_from_json(j);
}

nlohmann::json to_json(const RunConfig& c) {
  const EvolutionConfig& e = c.evolution;
  return {
      {"population_size", e.population_size},
      {"max_generations", e.max_generations},
      {"p_crossover", e.p_crossover},
      {"p_mutation", e.p_mutation},
      {"feature_map_set", e.feature_map_set},
      {"init_depth_range", {e.init_depth_min, e.init_depth_max}},
      {"mutation_weights",
       {{"add_skip", e.mutation_weights.add_skip},
        {"add_pool", e.mutation_weights.add_pool},
        {"remove", e.mutation_weights.remove},
        {"alter", e.mutation_weights.alter}}},
      {"rng_seed", e.rng_seed},
      {"evaluator",
       {{"kind", c.evaluator.kind == EvaluatorKind::kSurrogate ? "surrogate" : "external"},
        {"command", c.evaluator.command},
        {"endpoint", c.evaluator.endpoint},
        {"epochs", c.evaluator.epochs},
        {"dataset", c.evaluator.dataset},
        {"timeout_seconds", c.evaluator.timeout_seconds}}},
      {"workers", c.workers},
      {"out_dir", c.out_dir.string()},
      {"cache_path", c.cache_path.string()},
      {"input_shape", {c.input_shape.height, c.input_shape.width, c.input_shape.channels}},
      {"num_classes", c.num_classes},
      {"penalty_fitness", c.penalty_fitness},
  };
}

std::unique_ptr<Evaluator> make_evaluator(const RunConfig& config) {
  if (config.evaluator.kind == EvaluatorKind::kSurrogate) return std::make_unique<SurrogateEvaluator>();
  return std::make_unique<ExternalEvaluator>(config.evaluator, config.input_shape, config.num_classes);
}

}  // namespace cnnga
