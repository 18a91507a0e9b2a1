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

#ifndef CNNGA_EVOLUTION_HPP_
#define CNNGA_EVOLUTION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cnnga/genome.hpp"
#include "cnnga/rng.hpp"

namespace cnnga {

// A genome with its identifier and, once evaluated, a fitness in [0, 1].
class Individual {
 public:
  explicit Individual(Genome genome);
  Individual(Genome genome, double fitness);

  const Genome& genome() const { return genome_; }
  const Identifier& id() const { return id_; }
  const std::optional<double>& fitness() const { return fitness_; }
  bool evaluated() const { return fitness_.has_value(); }

  // Throws std::invalid_argument outside [0, 1].
  void set_fitness(double fitness);
  void clear_fitness() { fitness_.reset(); }
  // Throws std::logic_error when unevaluated.
  double require_fitness() const;

 private:
  Genome genome_;
  Identifier id_;
  std::optional<double> fitness_;
};

struct Population {
  std::vector<Individual> individuals;
  std::uint64_t generation = 0;

  std::size_t size() const { return individuals.size(); }
};

enum class MutationOp { kAddSkip = 0, kAddPool = 1, kRemove = 2, kAlter = 3 };

struct MutationWeights {
  double add_skip = 0.7;
  double add_pool = 0.1;
  double remove = 0.1;
  double alter = 0.1;

  // Scaled to sum to 1. Throws ConfigError on negative weights or a zero sum.
  MutationWeights normalized() const;
  friend bool operator==(const MutationWeights&, const MutationWeights&) = default;
};

struct EvolutionConfig {
  std::size_t population_size = 20;
  std::size_t max_generations = 20;
  double p_crossover = 0.9;
  double p_mutation = 0.2;
  std::vector<int> feature_map_set = {64, 128, 256};
  int init_depth_min = 1;
  int init_depth_max = 20;
  MutationWeights mutation_weights;
  std::uint64_t rng_seed = 0;

  // Throws ConfigError naming the offending field.
  void validate() const;
  friend bool operator==(const EvolutionConfig&, const EvolutionConfig&) = default;
};

Genome random_genome(const EvolutionConfig& config, Rng& rng);

// Unevaluated population of config.population_size random genomes.
Population initialize_population(const EvolutionConfig& config, Rng& rng);

// Index of the winner of one binary tournament: two uniform draws with
// replacement, the strictly fitter wins, an equal pair is settled by a coin.
std::size_t tournament_index(std::span<const Individual> pool, Rng& rng);
const Individual& binary_tournament(std::span<const Individual> pool, Rng& rng);

inline constexpr int kParentRetryLimit = 32;

// p2 is redrawn while it shares p1's identifier, at most kParentRetryLimit
// times; after that a duplicate pair is returned.
std::pair<Individual, Individual> select_parents(std::span<const Individual> pool, Rng& rng);

inline constexpr int kCrossoverResampleLimit = 8;

// Variable-length one-point crossover. Offspring always come back
// unevaluated, including parent copies from the no-crossover branch.
std::pair<Individual, Individual> crossover(const Individual& p1, const Individual& p2,
                                            double p_crossover, Rng& rng);

MutationOp draw_mutation_op(const MutationWeights& weights, bool allow_remove, Rng& rng);

// Returns the individual unchanged with probability 1 - p_mutation.
Individual mutate(const Individual& individual, const EvolutionConfig& config, Rng& rng);

// Selection, crossover and mutation producing |parents| offspring. Pairs are
// generated until at least |parents| exist; an odd surplus is dropped.
Population generate_offspring(const Population& parents, const EvolutionConfig& config, Rng& rng);

// Index of the best individual; equal fitness goes to the smaller identifier.
std::size_t best_index(std::span<const Individual> pool);

// |parents| binary tournaments over parents followed by offspring, then the
// overall best replaces the first worst selected individual if its
// identifier is absent. The result's generation is parents.generation + 1.
Population environmental_selection(const Population& parents, const Population& offspring, Rng& rng);

}  // namespace cnnga

#endif  // CNNGA_EVOLUTION_HPP_
