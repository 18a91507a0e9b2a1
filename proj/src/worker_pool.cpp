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

#include "cnnga/worker_pool.hpp"

#include <stdexcept>

namespace cnnga {

WorkerPool::WorkerPool(std::size_t slots) {
  if (slots == 0) throw std::invalid_argument("worker pool needs at least one slot");
  threads_.reserve(slots);
  for (std::size_t i = 0; i < slots; ++i) {
    threads_.emplace_back([this](std::stop_token stop) { slot_loop(stop); });
  }
}

WorkerPool::~WorkerPool() {
  for (auto& t : threads_) t.request_stop();
  task_ready_.notify_all();
}

void WorkerPool::slot_loop(std::stop_token stop) {
  while (true) {
    Task task;
    {
      std::unique_lock lock(mutex_);
      if (!task_ready_.wait(lock, stop, [this] { return !tasks_.empty(); })) return;
      task = tasks_.front();
      tasks_.pop_front();
    }
    EvaluationResult result;
    try {
      result = task.evaluator->evaluate(*task.job);
    } catch (const std::exception& e) {
      result = EvaluationResult::error(task.job->job_id, std::string("evaluator threw: ") + e.what());
    }
    {
      std::lock_guard lock(mutex_);
      results_.push_back({task.index, std::move(result)});
    }
    result_ready_.notify_one();
  }
}

std::vector<EvaluationResult> WorkerPool::run(std::span<const EvaluationJob> jobs, Evaluator& evaluator) {
  std::vector<EvaluationResult> results(jobs.size());
  if (jobs.empty()) return results;
  {
    std::lock_guard lock(mutex_);
    for (std::size_t i = 0; i < jobs.size(); ++i) tasks_.push_back({i, &jobs[i], &evaluator});
  }
  task_ready_.notify_all();
  std::size_t received = 0;
  std::unique_lock lock(mutex_);
  while (received < jobs.size()) {
    result_ready_.wait(lock, [this] { return !results_.empty(); });
    while (!results_.empty()) {
      Done done = std::move(results_.front());
      results_.pop_front();
      results[done.index] = std::move(done.result);
      ++received;
    }
  }
  return results;
}

}  // namespace cnnga
