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

#include <doctest.h>

#include <algorithm>
#include <random>

#include "cnnga/evaluator.hpp"
#include "support/fixtures.hpp"

namespace cnnga {
namespace {

Genome repeat(std::initializer_list<std::pair<LayerGene, int>> runs) {
  std::vector<LayerGene> layers;
  for (const auto& [gene, n] : runs) layers.insert(layers.end(), static_cast<std::size_t>(n), gene);
  return Genome(std::move(layers));
}

TEST_CASE("surrogate fitness closed-form values") {
  // Reference values evaluated in Python with math.exp.
  CHECK(surrogate_fitness(repeat({{LayerGene::skip(64, 128), 8}})) == doctest::Approx(0.7033326989614728));
  CHECK(surrogate_fitness(parse_genome("P:max")) == doctest::Approx(0.04076831628493507));
  CHECK(surrogate_fitness(parse_genome("S:64:128-S:128:64-P:max-S:64:64-S:256:128")) ==
        doctest::Approx(0.20826822658929017));
  const Genome peak = repeat({{LayerGene::skip(64, 64), 4}, {LayerGene::pool(PoolType::kMax), 3},
                              {LayerGene::skip(128, 256), 4}});
  CHECK(surrogate_fitness(peak) == 1.0);
}

TEST_CASE("surrogate fitness ignores gene order and stays in range") {
  std::mt19937 gen(3);
  for (int i = 0; i < 300; ++i) {
    const Genome g = testing::arbitrary_genome(gen, 20);
    const double f = surrogate_fitness(g);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    std::vector<LayerGene> shuffled(g.layers().begin(), g.layers().end());
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    CHECK(surrogate_fitness(Genome(shuffled)) == f);
  }
}

TEST_CASE("surrogate evaluator echoes the job id") {
  SurrogateEvaluator evaluator;
  const EvaluationResult r = evaluator.evaluate({"g1-p-0", parse_genome("S:64:64"), 1, 0});
  CHECK(r.job_id == "g1-p-0");
  CHECK(r.status == ResultStatus::kOk);
  CHECK(r.fitness == surrogate_fitness(parse_genome("S:64:64")));
}

}  // namespace
}  // namespace cnnga
