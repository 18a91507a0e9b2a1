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

#ifndef CNNGA_ENGINE_HPP_
#define CNNGA_ENGINE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cnnga/cache.hpp"
#include "cnnga/config.hpp"
#include "cnnga/evaluator.hpp"
#include "cnnga/evolution.hpp"
#include "cnnga/worker_pool.hpp"

namespace cnnga {

struct EvaluationSettings {
  InputShape input_shape;
  int num_classes = 10;
  int epochs = 1;
  double penalty_fitness = 0.0;
  std::uint64_t run_seed = 0;
  // Job ids are "<job_prefix>-<n>".
  std::string job_prefix = "job";
};

struct EvaluationStats {
  // Individuals answered by the cache without dispatch.
  std::size_t cache_hits = 0;
  // Evaluator calls, one per unique uncached identifier.
  std::size_t cache_misses = 0;
  // Individuals failing validation; they get the penalty and are not cached.
  std::size_t invalid = 0;
  // Evaluator calls that came back as errors; penalized and cached.
  std::size_t failures = 0;
};

// Seed handed to the evaluator for a genome; depends only on the run seed
// and the identifier.
std::uint64_t job_seed(std::uint64_t run_seed, const Identifier& id);

// Assigns a fitness to every individual. Cached identifiers are served from
// the cache, the rest are deduplicated and dispatched through `pool`, and
// all results are cached before returning. Throws TransportError, after
// caching the results that did arrive, when a job reports a transport
// failure.
EvaluationStats evaluate_population(Population& population, Evaluator& evaluator, FitnessCache& cache,
                                    const EvaluationSettings& settings, WorkerPool& pool);
EvaluationStats evaluate_population(Population& population, Evaluator& evaluator, FitnessCache& cache,
                                    const EvaluationSettings& settings, std::size_t worker_count);

struct GenerationRecord {
  std::uint64_t generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  Identifier best_id;
  std::size_t cache_hits = 0;
  std::size_t cache_misses = 0;
  double duration_seconds = 0.0;

  // Everything except the wall-clock duration.
  bool same_outcome(const GenerationRecord& other) const;
};

using RunHistory = std::vector<GenerationRecord>;

// history.csv omits the wall-clock column so identical runs give identical
// bytes; timings.csv carries it.
std::string history_csv(const RunHistory& history);
std::string timings_csv(const RunHistory& history);
bool same_outcome(const RunHistory& a, const RunHistory& b);

// Resumable state: `population` is P_generation, evaluated unless `history`
// is still empty.
struct EngineState {
  std::uint64_t generation = 0;
  Population population;
  RunHistory history;
};

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  RunConfig config;
  EngineState state;
  std::filesystem::path cache_path;
  bool finished = false;
};

nlohmann::json to_json(const Checkpoint& checkpoint);
// Throws CheckpointError on a missing or unreadable file, a version
// mismatch or a malformed layout.
Checkpoint load_checkpoint(const std::filesystem::path& path);
void store_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);

struct RunOutcome {
  bool finished = false;
  Individual best;
  RunHistory history;
};

// Generational loop: P_0 is initialized and evaluated, then each generation
// evaluates P_t, breeds Q_t, evaluates Q_t and selects P_{t+1}. After every
// generation the cache and <out_dir>/checkpoint.json are written.
class Engine {
 public:
  // Fresh run. Loads config.cache_path when it is set explicitly and exists.
  Engine(RunConfig config, Evaluator& evaluator);
  // Continues from a checkpoint; its cache file must exist.
  Engine(Checkpoint checkpoint, Evaluator& evaluator);

  // Runs to max_generations, or stops once `stop_after` generations are
  // complete. A transport failure writes a checkpoint and rethrows.
  RunOutcome run(std::optional<std::uint64_t> stop_after = std::nullopt);

  const RunConfig& config() const { return config_; }
  const FitnessCache& cache() const { return cache_; }
  const EngineState& state() const { return state_; }
  std::filesystem::path checkpoint_path() const { return config_.out_dir / "checkpoint.json"; }

 private:
  EvaluationSettings settings(const std::string& job_prefix) const;
  void write_checkpoint(bool finished) const;
  GenerationRecord summarize(const Population& pop, const EvaluationStats& stats, double seconds) const;

  RunConfig config_;
  Evaluator& evaluator_;
  FitnessCache cache_;
  EngineState state_;
  WorkerPool pool_;
};

// Fresh run to completion.
RunOutcome run_search(const RunConfig& config, Evaluator& evaluator);

// history.csv, timings.csv, best.genome and best.arch.json under out_dir.
void write_run_artifacts(const RunConfig& config, const RunOutcome& outcome);

}  // namespace cnnga

#endif  // CNNGA_ENGINE_HPP_
