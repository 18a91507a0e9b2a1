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

#ifndef CNNGA_TESTS_FIXTURES_HPP_
#define CNNGA_TESTS_FIXTURES_HPP_

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "cnnga/evaluator.hpp"
#include "cnnga/evolution.hpp"

namespace cnnga::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("cnnga-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Genome generator for property tests; independent of the library's Rng.
inline Genome arbitrary_genome(std::mt19937& gen, int max_length = 12) {
  std::uniform_int_distribution<int> length(1, max_length);
  std::uniform_int_distribution<int> kind(0, 2);
  std::uniform_int_distribution<int> fm(0, 2);
  static constexpr int kMaps[] = {64, 128, 256};
  std::vector<LayerGene> layers;
  const int n = length(gen);
  for (int i = 0; i < n; ++i) {
    switch (kind(gen)) {
      case 0:
        layers.push_back(LayerGene::pool(PoolType::kMax));
        break;
      case 1:
        layers.push_back(LayerGene::pool(PoolType::kMean));
        break;
      default:
        layers.push_back(LayerGene::skip(kMaps[fm(gen)], kMaps[fm(gen)]));
    }
  }
  return Genome(std::move(layers));
}

// Surrogate evaluator that records every call.
class CountingEvaluator : public Evaluator {
 public:
  EvaluationResult evaluate(const EvaluationJob& job) override {
    {
      std::lock_guard lock(mutex_);
      calls_.push_back(identifier(job.genome));
    }
    return EvaluationResult::ok(job.job_id, surrogate_fitness(job.genome));
  }
  std::size_t calls() const {
    std::lock_guard lock(mutex_);
    return calls_.size();
  }
  std::vector<Identifier> call_log() const {
    std::lock_guard lock(mutex_);
    return calls_;
  }

 private:
  mutable std::mutex mutex_;
  std::vector<Identifier> calls_;
};

}  // namespace cnnga::testing

#endif  // CNNGA_TESTS_FIXTURES_HPP_
