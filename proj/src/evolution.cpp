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

#include "cnnga/evolution.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>
#include <string>

#include "cnnga/errors.hpp"

namespace cnnga {

Individual::Individual(Genome genome) : genome_(std::move(genome)), id_(identifier(genome_)) {}

Individual::Individual(Genome genome, double fitness) : Individual(std::move(genome)) {
  set_fitness(fitness);
}

void Individual::set_fitness(double fitness) {
  if (!(fitness >= 0.0 && fitness <= 1.0)) {
    throw std::invalid_argument("fitness " + std::to_string(fitness) + " outside [0, 1]");
  }
  fitness_ = fitness;
}

double Individual::require_fitness() const {
  if (!fitness_) throw std::logic_error("individual " + id_ + " has not been evaluated");
  return *fitness_;
}

MutationWeights MutationWeights::normalized() const {
  const std::array<std::pair<const char*, double>, 4> parts = {
      {{"mutation_weights.add_skip", add_skip},
       {"mutation_weights.add_pool", add_pool},
       {"mutation_weights.remove", remove},
       {"mutation_weights.alter", alter}}};
  double sum = 0.0;
  for (const auto& [name, w] : parts) {
    if (!(w >= 0.0)) throw ConfigError(name, "must be non-negative");
    sum += w;
  }
  if (!(sum > 0.0)) throw ConfigError("mutation_weights", "weights must not all be zero");
  return {add_skip / sum, add_pool / sum, remove / sum, alter / sum};
}

void EvolutionConfig::validate() const {
  if (population_size == 0) throw ConfigError("population_size", "must be at least 1");
  if (!(p_crossover >= 0.0 && p_crossover <= 1.0)) {
    throw ConfigError("p_crossover", "must lie in [0, 1]");
  }
  if (!(p_mutation >= 0.0 && p_mutation <= 1.0)) {
    throw ConfigError("p_mutation", "must lie in [0, 1]");
  }
  if (feature_map_set.empty()) throw ConfigError("feature_map_set", "must not be empty");
  for (int f : feature_map_set) {
    if (f <= 0) throw ConfigError("feature_map_set", "feature-map counts must be positive");
  }
  if (init_depth_min < 1) throw ConfigError("init_depth_range", "lower bound must be at least 1");
  if (init_depth_max < init_depth_min) {
    throw ConfigError("init_depth_range", "upper bound below lower bound");
  }
  (void)mutation_weights.normalized();
}

namespace {

int random_feature_maps(const EvolutionConfig& config, Rng& rng) {
  return config.feature_map_set[rng.below(config.feature_map_set.size())];
}

LayerGene random_skip(const EvolutionConfig& config, Rng& rng) {
  const int f1 = random_feature_maps(config, rng);
  const int f2 = random_feature_maps(config, rng);
  return LayerGene::skip(f1, f2);
}

LayerGene random_pool(Rng& rng) {
  return LayerGene::pool(rng.uniform01() < 0.5 ? PoolType::kMax : PoolType::kMean);
}

std::vector<LayerGene> slice(std::span<const LayerGene> layers, std::size_t from, std::size_t to) {
  return {layers.begin() + static_cast<std::ptrdiff_t>(from),
          layers.begin() + static_cast<std::ptrdiff_t>(to)};
}

// Split point in [1, len-1] for len >= 2, in {0, 1} for len == 1.
std::size_t split_point(std::size_t length, Rng& rng) {
  if (length == 1) return rng.below(2);
  return 1 + rng.below(length - 1);
}

Individual without_fitness(const Individual& ind) {
  Individual copy = ind;
  copy.clear_fitness();
  return copy;
}

}  // namespace

Genome random_genome(const EvolutionConfig& config, Rng& rng) {
  const int length = rng.between(config.init_depth_min, config.init_depth_max);
  std::vector<LayerGene> layers;
  layers.reserve(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) {
    if (rng.uniform01() < 0.5) {
      layers.push_back(random_skip(config, rng));
    } else {
      layers.push_back(random_pool(rng));
    }
  }
  return Genome(std::move(layers));
}

Population initialize_population(const EvolutionConfig& config, Rng& rng) {
  if (config.population_size == 0) throw ConfigError("population_size", "must be at least 1");
  Population pop;
  pop.individuals.reserve(config.population_size);
  while (pop.individuals.size() < config.population_size) {
    pop.individuals.emplace_back(random_genome(config, rng));
  }
  return pop;
}

std::size_t tournament_index(std::span<const Individual> pool, Rng& rng) {
  if (pool.empty()) throw std::invalid_argument("tournament over an empty population");
  const std::size_t a = rng.below(pool.size());
  const std::size_t b = rng.below(pool.size());
  const double fa = pool[a].require_fitness();
  const double fb = pool[b].require_fitness();
  if (fa > fb) return a;
  if (fb > fa) return b;
  return rng.uniform01() < 0.5 ? a : b;
}

const Individual& binary_tournament(std::span<const Individual> pool, Rng& rng) {
  return pool[tournament_index(pool, rng)];
}

std::pair<Individual, Individual> select_parents(std::span<const Individual> pool, Rng& rng) {
  const Individual& p1 = binary_tournament(pool, rng);
  const Individual* p2 = &binary_tournament(pool, rng);
  for (int retry = 0; retry < kParentRetryLimit && p2->id() == p1.id(); ++retry) {
    p2 = &binary_tournament(pool, rng);
  }
  return {p1, *p2};
}

std::pair<Individual, Individual> crossover(const Individual& p1, const Individual& p2,
                                            double p_crossover, Rng& rng) {
  if (rng.uniform01() >= p_crossover) return {without_fitness(p1), without_fitness(p2)};
  const auto a = p1.genome().layers();
  const auto b = p2.genome().layers();
  for (int attempt = 0; attempt <= kCrossoverResampleLimit; ++attempt) {
    const std::size_t sa = split_point(a.size(), rng);
    const std::size_t sb = split_point(b.size(), rng);
    std::vector<LayerGene> o1 = slice(a, 0, sa);
    std::vector<LayerGene> tail_b = slice(b, sb, b.size());
    o1.insert(o1.end(), tail_b.begin(), tail_b.end());
    std::vector<LayerGene> o2 = slice(b, 0, sb);
    std::vector<LayerGene> tail_a = slice(a, sa, a.size());
    o2.insert(o2.end(), tail_a.begin(), tail_a.end());
    if (!o1.empty() && !o2.empty()) {
      return {Individual(Genome(std::move(o1))), Individual(Genome(std::move(o2)))};
    }
  }
  return {without_fitness(p1), without_fitness(p2)};
}

MutationOp draw_mutation_op(const MutationWeights& weights, bool allow_remove, Rng& rng) {
  MutationWeights w = weights.normalized();
  if (!allow_remove) {
    w.remove = 0.0;
    // Nothing but removal was possible; altering at least keeps the length.
    if (w.add_skip + w.add_pool + w.alter <= 0.0) return MutationOp::kAlter;
    w = w.normalized();
  }
  const double u = rng.uniform01();
  double cumulative = w.add_skip;
  if (u < cumulative) return MutationOp::kAddSkip;
  cumulative += w.add_pool;
  if (u < cumulative) return MutationOp::kAddPool;
  cumulative += w.remove;
  if (u < cumulative) return MutationOp::kRemove;
  if (w.alter > 0.0) return MutationOp::kAlter;
  // Rounding left u past the final boundary; take the last non-zero weight.
  if (w.remove > 0.0) return MutationOp::kRemove;
  if (w.add_pool > 0.0) return MutationOp::kAddPool;
  return MutationOp::kAddSkip;
}

Individual mutate(const Individual& individual, const EvolutionConfig& config, Rng& rng) {
  if (rng.uniform01() >= config.p_mutation) return individual;
  Genome genome = individual.genome();
  const std::size_t position = rng.below(genome.size());
  const MutationOp op = draw_mutation_op(config.mutation_weights, genome.size() > 1, rng);
  switch (op) {
    case MutationOp::kAddSkip:
      genome.insert(position, random_skip(config, rng));
      break;
    case MutationOp::kAddPool:
      genome.insert(position, random_pool(rng));
      break;
    case MutationOp::kRemove:
      genome.erase(position);
      break;
    case MutationOp::kAlter:
      if (genome[position].is_skip()) {
        genome.replace(position, random_skip(config, rng));
      } else {
        const PoolType current = genome[position].as_pool().pool_type;
        genome.replace(position,
                       LayerGene::pool(current == PoolType::kMax ? PoolType::kMean : PoolType::kMax));
      }
      break;
  }
  if (genome == individual.genome()) return individual;
  return Individual(std::move(genome));
}

Population generate_offspring(const Population& parents, const EvolutionConfig& config, Rng& rng) {
  Population offspring;
  offspring.generation = parents.generation;
  const std::size_t target = parents.size();
  offspring.individuals.reserve(target + 1);
  while (offspring.individuals.size() < target) {
    auto [p1, p2] = select_parents(parents.individuals, rng);
    auto [o1, o2] = crossover(p1, p2, config.p_crossover, rng);
    offspring.individuals.push_back(std::move(o1));
    offspring.individuals.push_back(std::move(o2));
  }
  offspring.individuals.resize(target, offspring.individuals.front());
  for (Individual& ind : offspring.individuals) ind = mutate(ind, config, rng);
  return offspring;
}

std::size_t best_index(std::span<const Individual> pool) {
  if (pool.empty()) throw std::invalid_argument("best of an empty population");
  std::size_t best = 0;
  for (std::size_t i = 1; i < pool.size(); ++i) {
    const double fi = pool[i].require_fitness();
    const double fb = pool[best].require_fitness();
    if (fi > fb || (fi == fb && pool[i].id() < pool[best].id())) best = i;
  }
  return best;
}

Population environmental_selection(const Population& parents, const Population& offspring, Rng& rng) {
  std::vector<Individual> pool;
  pool.reserve(parents.size() + offspring.size());
  pool.insert(pool.end(), parents.individuals.begin(), parents.individuals.end());
  pool.insert(pool.end(), offspring.individuals.begin(), offspring.individuals.end());
  for (const Individual& ind : pool) (void)ind.require_fitness();

  Population next;
  next.generation = parents.generation + 1;
  next.individuals.reserve(parents.size());
  while (next.individuals.size() < parents.size()) {
    next.individuals.push_back(binary_tournament(pool, rng));
  }
  if (next.individuals.empty()) return next;

  const Individual& elite = pool[best_index(pool)];
  const bool present = std::any_of(next.individuals.begin(), next.individuals.end(),
                                   [&](const Individual& ind) { return ind.id() == elite.id(); });
  if (!present) {
    auto worst = std::min_element(next.individuals.begin(), next.individuals.end(),
                                  [](const Individual& a, const Individual& b) {
                                    return a.require_fitness() < b.require_fitness();
                                  });
    *worst = elite;
  }
  return next;
}

}  // namespace cnnga
