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

#ifndef CNNGA_EVALUATOR_HPP_
#define CNNGA_EVALUATOR_HPP_

#include <cstdint>
#include <string>

#include "cnnga/genome.hpp"

namespace cnnga {

struct EvaluationJob {
  std::string job_id;
  Genome genome;
  int epochs = 1;
  std::uint64_t seed = 0;
};

enum class ResultStatus {
  kOk,
  // The worker could not evaluate the genome; the engine assigns the penalty.
  kError,
  // The channel to the worker failed even after a retry; the engine aborts.
  kTransportFailure,
};

struct EvaluationResult {
  std::string job_id;
  ResultStatus status = ResultStatus::kOk;
  double fitness = 0.0;
  std::string message;

  static EvaluationResult ok(std::string job_id, double fitness) {
    return {std::move(job_id), ResultStatus::kOk, fitness, {}};
  }
  static EvaluationResult error(std::string job_id, std::string message,
                                ResultStatus status = ResultStatus::kError) {
    return {std::move(job_id), status, 0.0, std::move(message)};
  }
};

// Implementations must tolerate concurrent evaluate() calls from up to
// worker_count engine slots.
class Evaluator {
 public:
  virtual ~Evaluator() = default;
  virtual EvaluationResult evaluate(const EvaluationJob& job) = 0;
};

// Closed-form stand-in for training. With n_s skip genes, n_p pool genes and
// q the fraction of skip genes with f2 >= f1 (0 without skip genes):
//   0.5 * exp(-(n_s - 8)^2 / 8) + 0.3 * exp(-(n_p - 3)^2 / 2) + 0.2 * q
// It peaks at exactly 1 for n_s = 8, n_p = 3, q = 1.
double surrogate_fitness(const Genome& genome);

class SurrogateEvaluator : public Evaluator {
 public:
  EvaluationResult evaluate(const EvaluationJob& job) override {
    return EvaluationResult::ok(job.job_id, surrogate_fitness(job.genome));
  }
};

}  // namespace cnnga

#endif  // CNNGA_EVALUATOR_HPP_
