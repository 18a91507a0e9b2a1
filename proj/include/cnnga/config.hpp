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

#ifndef CNNGA_CONFIG_HPP_
#define CNNGA_CONFIG_HPP_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "cnnga/architecture.hpp"
#include "cnnga/evolution.hpp"
#include "cnnga/external_evaluator.hpp"

namespace cnnga {

// Everything a search run needs. Defaults: population 20, 20 generations,
// crossover 0.9, mutation 0.2, feature maps {64, 128, 256}, mutation
// weights 0.7 / 0.1 / 0.1 / 0.1.
struct RunConfig {
  EvolutionConfig evolution;
  EvaluatorSpec evaluator;
  std::size_t workers = 1;
  std::filesystem::path out_dir = "cnnga-out";
  // Empty means <out_dir>/cache.txt, started fresh. An explicit path is
  // loaded when it already exists.
  std::filesystem::path cache_path;
  InputShape input_shape;
  int num_classes = 10;
  double penalty_fitness = 0.0;

  void validate() const;
  std::filesystem::path resolved_cache_path() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Missing keys keep their defaults; unknown keys and ill-typed or
// out-of-range values throw ConfigError naming the key.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

// SurrogateEvaluator or ExternalEvaluator according to config.evaluator.
std::unique_ptr<Evaluator> make_evaluator(const RunConfig& config);

}  // namespace cnnga

#endif  // CNNGA_CONFIG_HPP_
