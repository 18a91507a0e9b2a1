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

#ifndef CNNGA_RNG_HPP_
#define CNNGA_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>

namespace cnnga {

// Operator classes that get their own child stream each generation.
enum class StreamKind : std::uint64_t {
  kInitialization = 1,
  kOffspring = 2,
  kEnvironmentalSelection = 3,
  kJobSeed = 4,
};

std::uint64_t splitmix64(std::uint64_t x);

// Seedable generator built on std::mt19937_64. Draw primitives are defined
// here rather than through <random> distributions, whose output is not
// specified across standard library implementations.
//
// Stream splitting: the child stream for (seed, generation, kind) is seeded
// with splitmix64(splitmix64(seed) ^ splitmix64(generation << 8 | kind)).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t generation, StreamKind kind);

  std::uint64_t next() { return engine_(); }

  // Uniform on the open interval (0, 1) with 53 bits of resolution.
  double uniform01() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, n); n must be positive. Rejection sampling keeps
  // it unbiased.
  std::size_t below(std::size_t n);

  // Uniform integer in [lo, hi].
  int between(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo) + 1));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cnnga

#endif  // CNNGA_RNG_HPP_
