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

#ifndef CNNGA_WORKER_POOL_HPP_
#define CNNGA_WORKER_POOL_HPP_

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

#include "cnnga/evaluator.hpp"

namespace cnnga {

// Fixed set of evaluator slots. Jobs are pulled from a shared queue by the
// slot threads; results travel back through a second queue and are merged
// by the caller's thread in job order.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t slots);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t slots() const { return threads_.size(); }

  // Blocks until every job has a result; results[i] answers jobs[i].
  // Exceptions escaping the evaluator become kError results.
  std::vector<EvaluationResult> run(std::span<const EvaluationJob> jobs, Evaluator& evaluator);

 private:
  struct Task {
    std::size_t index;
    const EvaluationJob* job;
    Evaluator* evaluator;
  };
  struct Done {
    std::size_t index;
    EvaluationResult result;
  };

  void slot_loop(std::stop_token stop);

  std::mutex mutex_;
  std::condition_variable_any task_ready_;
  std::condition_variable result_ready_;
  std::deque<Task> tasks_;
  std::deque<Done> results_;
  std::vector<std::jthread> threads_;
};

}  // namespace cnnga

#endif  // CNNGA_WORKER_POOL_HPP_
