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

#include "cnnga/evaluator.hpp"

#include <algorithm>
#include <cmath>

namespace cnnga {

double surrogate_fitness(const Genome& genome) {
  const auto layers = genome.layers();
  const double skips = static_cast<double>(genome.skip_count());
  const double pools = static_cast<double>(genome.pool_count());
  const auto widening = std::count_if(layers.begin(), layers.end(), [](const LayerGene& g) {
    return g.is_skip() && g.as_skip().f2 >= g.as_skip().f1;
  });
  const double q = skips > 0 ? static_cast<double>(widening) / skips : 0.0;
  const double value = 0.5 * std::exp(-(skips - 8.0) * (skips - 8.0) / 8.0) +
                       0.3 * std::exp(-(pools - 3.0) * (pools - 3.0) / 2.0) + 0.2 * q;
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace cnnga
