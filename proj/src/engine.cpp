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

#include "cnnga/engine.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <numeric>
#include <unordered_map>

#include "cnnga/architecture.hpp"
#include "cnnga/errors.hpp"
#include "cnnga/io.hpp"

namespace cnnga {

std::uint64_t job_seed(std::uint64_t run_seed, const Identifier& id) {
  const std::uint64_t prefix = std::stoull(id.substr(0, 16), nullptr, 16);
  // Masked to 63 bits so it fits a signed JSON integer on the worker side.
  return splitmix64(splitmix64(run_seed) ^ prefix ^ static_cast<std::uint64_t>(StreamKind::kJobSeed)) >> 1;
}

EvaluationStats evaluate_population(Population& population, Evaluator& evaluator, FitnessCache& cache,
                                    const EvaluationSettings& settings, WorkerPool& pool) {
  EvaluationStats stats;
  const int spatial = std::min(settings.input_shape.height, settings.input_shape.width);
  std::vector<EvaluationJob> jobs;
  std::unordered_map<Identifier, std::size_t> job_of;
  for (Individual& ind : population.individuals) {
    if (!validate(ind.genome(), spatial).valid) {
      ind.set_fitness(settings.penalty_fitness);
      ++stats.invalid;
      continue;
    }
    if (auto cached = cache.lookup(ind.id())) {
      ind.set_fitness(*cached);
      ++stats.cache_hits;
      continue;
    }
    if (job_of.contains(ind.id())) continue;
    job_of.emplace(ind.id(), jobs.size());
    jobs.push_back({settings.job_prefix + "-" + std::to_string(jobs.size()), ind.genome(), settings.epochs,
                    job_seed(settings.run_seed, ind.id())});
  }
  stats.cache_misses = jobs.size();

  const std::vector<EvaluationResult> results = pool.run(jobs, evaluator);
  std::string transport_failure;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const EvaluationResult& r = results[i];
    const Identifier id = identifier(jobs[i].genome);
    switch (r.status) {
      case ResultStatus::kOk:
        cache.insert(id, r.fitness);
        break;
      case ResultStatus::kError:
        spdlog::warn("job {} ({}) failed, penalty fitness assigned: {}", r.job_id,
                     canonical_serialize(jobs[i].genome), r.message);
        ++stats.failures;
        cache.insert(id, settings.penalty_fitness);
        break;
      case ResultStatus::kTransportFailure:
        if (transport_failure.empty()) transport_failure = r.job_id + ": " + r.message;
        break;
    }
  }
  if (!transport_failure.empty()) throw TransportError(transport_failure);

  for (Individual& ind : population.individuals) {
    if (ind.evaluated() && !job_of.contains(ind.id())) continue;
    ind.set_fitness(*cache.lookup(ind.id()));
  }
  return stats;
}

EvaluationStats evaluate_population(Population& population, Evaluator& evaluator, FitnessCache& cache,
                                    const EvaluationSettings& settings, std::size_t worker_count) {
  WorkerPool pool(worker_count);
  return evaluate_population(population, evaluator, cache, settings, pool);
}

bool GenerationRecord::same_outcome(const GenerationRecord& o) const {
  return generation == o.generation && best_fitness == o.best_fitness && mean_fitness == o.mean_fitness &&
         best_id == o.best_id && cache_hits == o.cache_hits && cache_misses == o.cache_misses;
}

bool same_outcome(const RunHistory& a, const RunHistory& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const GenerationRecord& x, const GenerationRecord& y) { return x.same_outcome(y); });
}

std::string history_csv(const RunHistory& history) {
  std::string out = "generation,best_fitness,mean_fitness,best_identifier,cache_hits,cache_misses\n";
  for (const GenerationRecord& r : history) {
    out += std::to_string(r.generation) + ',' + format_double(r.best_fitness) + ',' +
           format_double(r.mean_fitness) + ',' + r.best_id + ',' + std::to_string(r.cache_hits) + ',' +
           std::to_string(r.cache_misses) + '\n';
  }
  return out;
}

std::string timings_csv(const RunHistory& history) {
  std::string out = "generation,duration_seconds\n";
  for (const GenerationRecord& r : history) {
    out += std::to_string(r.generation) + ',' + format_double(r.duration_seconds) + '\n';
  }
  return out;
}

namespace {

nlohmann::json record_to_json(const GenerationRecord& r) {
  return {{"generation", r.generation},  {"best_fitness", r.best_fitness}, {"mean_fitness", r.mean_fitness},
          {"best_identifier", r.best_id}, {"cache_hits", r.cache_hits},    {"cache_misses", r.cache_misses},
          {"duration_seconds", r.duration_seconds}};
}

GenerationRecord record_from_json(const nlohmann::json& j) {
  GenerationRecord r;
  r.generation = j.at("generation").get<std::uint64_t>();
  r.best_fitness = j.at("best_fitness").get<double>();
  r.mean_fitness = j.at("mean_fitness").get<double>();
  r.best_id = j.at("best_identifier").get<std::string>();
  r.cache_hits = j.at("cache_hits").get<std::size_t>();
  r.cache_misses = j.at("cache_misses").get<std::size_t>();
  r.duration_seconds = j.at("duration_seconds").get<double>();
  return r;
}

constexpr const char* kRngAlgorithm = "mt19937_64/splitmix64-streams";

}  // namespace

nlohmann::json to_json(const Checkpoint& c) {
  nlohmann::json population = nlohmann::json::array();
  for (const Individual& ind : c.state.population.individuals) {
    population.push_back({{"genome", canonical_serialize(ind.genome())},
                          {"fitness", ind.fitness() ? nlohmann::json(*ind.fitness()) : nlohmann::json(nullptr)}});
  }
  nlohmann::json history = nlohmann::json::array();
  for (const auto& r : c.state.history) history.push_back(record_to_json(r));
  return {
      {"format", "cnnga-checkpoint"},
      {"version", kCheckpointVersion},
      {"generation", c.state.generation},
      {"finished", c.finished},
      {"population", std::move(population)},
      {"rng", {{"algorithm", kRngAlgorithm}, {"seed", c.config.evolution.rng_seed},
               {"next_stream_generation", c.state.generation}}},
      {"config", to_json(c.config)},
      {"cache_path", c.cache_path.string()},
      {"history", std::move(history)},
  };
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw CheckpointError("checkpoint '" + path.string() + "' does not exist");
  const auto j = nlohmann::json::parse(read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw CheckpointError("checkpoint '" + path.string() + "' is not a JSON object");
  }
  if (j.value("format", std::string()) != "cnnga-checkpoint") {
    throw CheckpointError("'" + path.string() + "' is not a cnnga checkpoint");
  }
  const auto version = j.find("version");
  if (version == j.end() || !version->is_number_integer() || version->get<int>() != kCheckpointVersion) {
    throw CheckpointError("checkpoint version " + (version == j.end() ? std::string("<missing>") : version->dump()) +
                          " is not supported; this build reads version " + std::to_string(kCheckpointVersion));
  }
  try {
    Checkpoint c;
    c.config = run_config_from_json(j.at("config"));
    if (j.at("rng").at("algorithm").get<std::string>() != kRngAlgorithm) {
      throw CheckpointError("checkpoint uses an unknown RNG algorithm");
    }
    c.state.generation = j.at("generation").get<std::uint64_t>();
    c.finished = j.at("finished").get<bool>();
    c.cache_path = j.at("cache_path").get<std::string>();
    c.state.population.generation = c.state.generation;
    for (const auto& item : j.at("population")) {
      Individual ind(parse_genome(item.at("genome").get<std::string>()));
      if (!item.at("fitness").is_null()) ind.set_fitness(item.at("fitness").get<double>());
      c.state.population.individuals.push_back(std::move(ind));
    }
    for (const auto& r : j.at("history")) c.state.history.push_back(record_from_json(r));
    if (c.state.population.individuals.empty()) throw CheckpointError("checkpoint population is empty");
    return c;
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw CheckpointError("malformed checkpoint '" + path.string() + "': " + e.what());
  }
}

void store_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  write_file_atomic(path, to_json(checkpoint).dump(2) + "\n");
}

Engine::Engine(RunConfig config, Evaluator& evaluator)
    : config_(std::move(config)), evaluator_(evaluator), pool_(std::max<std::size_t>(config_.workers, 1)) {
  config_.validate();
  if (!config_.cache_path.empty() && std::filesystem::exists(config_.cache_path)) {
    cache_ = FitnessCache::load(config_.cache_path);
    spdlog::info("loaded {} cached fitness values from {}", cache_.size(), config_.cache_path.string());
  }
  Rng rng = Rng::stream(config_.evolution.rng_seed, 0, StreamKind::kInitialization);
  state_.population = initialize_population(config_.evolution, rng);
}

Engine::Engine(Checkpoint checkpoint, Evaluator& evaluator)
    : config_(std::move(checkpoint.config)),
      evaluator_(evaluator),
      state_(std::move(checkpoint.state)),
      pool_(std::max<std::size_t>(config_.workers, 1)) {
  config_.validate();
  if (!std::filesystem::exists(checkpoint.cache_path)) {
    throw CheckpointError("cache file '" + checkpoint.cache_path.string() + "' referenced by the checkpoint is missing");
  }
  cache_ = FitnessCache::load(checkpoint.cache_path);
  config_.cache_path = checkpoint.cache_path;
}

EvaluationSettings Engine::settings(const std::string& job_prefix) const {
  return {config_.input_shape, config_.num_classes, config_.evaluator.epochs, config_.penalty_fitness,
          config_.evolution.rng_seed, job_prefix};
}

GenerationRecord Engine::summarize(const Population& pop, const EvaluationStats& stats, double seconds) const {
  GenerationRecord r;
  r.generation = pop.generation;
  const Individual& best = pop.individuals[best_index(pop.individuals)];
  r.best_fitness = best.require_fitness();
  r.best_id = best.id();
  double sum = 0.0;
  for (const Individual& ind : pop.individuals) sum += ind.require_fitness();
  r.mean_fitness = sum / static_cast<double>(pop.size());
  r.cache_hits = stats.cache_hits;
  r.cache_misses = stats.cache_misses;
  r.duration_seconds = seconds;
  return r;
}

void Engine::write_checkpoint(bool finished) const {
  const auto cache_path = config_.resolved_cache_path();
  cache_.store(cache_path);
  store_checkpoint(Checkpoint{config_, state_, cache_path, finished}, checkpoint_path());
}

RunOutcome Engine::run(std::optional<std::uint64_t> stop_after) {
  using Clock = std::chrono::steady_clock;
  const auto seconds_since = [](Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  try {
    if (state_.history.empty()) {
      const auto start = Clock::now();
      state_.population.generation = 0;
      const auto stats = evaluate_population(state_.population, evaluator_, cache_, settings("g0-p"), pool_);
      state_.history.push_back(summarize(state_.population, stats, seconds_since(start)));
      state_.generation = 0;
      write_checkpoint(config_.evolution.max_generations == 0);
      spdlog::info("generation 0: best {:.4f}", state_.history.back().best_fitness);
    }
    while (state_.generation < config_.evolution.max_generations) {
      if (stop_after && state_.generation >= *stop_after) break;
      const auto start = Clock::now();
      const std::uint64_t t = state_.generation;
      const std::string tag = "g" + std::to_string(t + 1);
      Population parents = state_.population;
      auto stats = evaluate_population(parents, evaluator_, cache_, settings(tag + "-p"), pool_);
      Rng breed = Rng::stream(config_.evolution.rng_seed, t, StreamKind::kOffspring);
      Population offspring = generate_offspring(parents, config_.evolution, breed);
      const auto offspring_stats = evaluate_population(offspring, evaluator_, cache_, settings(tag + "-q"), pool_);
      stats.cache_hits += offspring_stats.cache_hits;
      stats.cache_misses += offspring_stats.cache_misses;
      Rng select = Rng::stream(config_.evolution.rng_seed, t, StreamKind::kEnvironmentalSelection);
      Population next = environmental_selection(parents, offspring, select);
      state_.history.push_back(summarize(next, stats, seconds_since(start)));
      state_.population = std::move(next);
      state_.generation = t + 1;
      write_checkpoint(state_.generation == config_.evolution.max_generations);
      spdlog::info("generation {}: best {:.4f}, mean {:.4f}, {} evaluations", state_.generation,
                   state_.history.back().best_fitness, state_.history.back().mean_fitness, stats.cache_misses);
    }
  } catch (const TransportError& e) {
    spdlog::error("evaluator transport failed, checkpointing generation {}: {}", state_.generation, e.what());
    write_checkpoint(false);
    throw;
  }
  const Population& pop = state_.population;
  return RunOutcome{state_.generation >= config_.evolution.max_generations,
                    pop.individuals[best_index(pop.individuals)], state_.history};
}

RunOutcome run_search(const RunConfig& config, Evaluator& evaluator) {
  Engine engine(config, evaluator);
  return engine.run();
}

void write_run_artifacts(const RunConfig& config, const RunOutcome& outcome) {
  write_file_atomic(config.out_dir / "history.csv", history_csv(outcome.history));
  write_file_atomic(config.out_dir / "timings.csv", timings_csv(outcome.history));
  write_file_atomic(config.out_dir / "best.genome", canonical_serialize(outcome.best.genome()) + "\n");
  try {
    const ArchitectureIR arch = decode(outcome.best.genome(), config.input_shape, config.num_classes);
    write_file_atomic(config.out_dir / "best.arch.json", to_json(arch).dump(2) + "\n");
  } catch (const ValidationError& e) {
    spdlog::warn("best genome does not decode, best.arch.json not written: {}", e.what());
  }
}

}  // namespace cnnga
