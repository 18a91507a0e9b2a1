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

#ifndef CNNGA_EXTERNAL_EVALUATOR_HPP_
#define CNNGA_EXTERNAL_EVALUATOR_HPP_

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cnnga/architecture.hpp"
#include "cnnga/evaluator.hpp"
#include "cnnga/line_channel.hpp"

namespace cnnga {

enum class EvaluatorKind { kSurrogate, kExternal };

struct EvaluatorSpec {
  EvaluatorKind kind = EvaluatorKind::kSurrogate;
  // Exactly one of command / endpoint is used when kind is kExternal; a
  // non-empty endpoint wins.
  std::string command;
  std::string endpoint;
  int epochs = 1;
  std::string dataset = "cifar10";
  // Zero waits indefinitely.
  double timeout_seconds = 0.0;

  // Throws ConfigError.
  void validate() const;
  friend bool operator==(const EvaluatorSpec&, const EvaluatorSpec&) = default;
};

// Wire protocol: one JSON object per line, UTF-8.
//   request:  {"job_id", "genome", "arch", "epochs", "seed", "dataset"}
//   response: {"job_id", "status": "ok"|"error", "fitness", "message"}
namespace wire {

struct Request {
  std::string job_id;
  std::string genome;
  nlohmann::json arch;
  int epochs = 0;
  std::uint64_t seed = 0;
  std::string dataset;
};

std::string encode_request(const EvaluationJob& job, const ArchitectureIR& arch,
                           const std::string& dataset);
// Throws std::invalid_argument on a malformed line.
Request decode_request(std::string_view line);

std::string encode_response(const EvaluationResult& result);
// Never throws: malformed or mismatched responses become kError results
// whose message says what was wrong.
EvaluationResult decode_response(std::string_view line, const std::string& expected_job_id);

}  // namespace wire

// Client for trainer processes speaking the wire protocol over a spawned
// child's stdin/stdout or a TCP connection. Each in-flight call holds one
// channel exclusively; idle channels are reused by later calls.
class ExternalEvaluator : public Evaluator {
 public:
  ExternalEvaluator(EvaluatorSpec spec, InputShape input_shape, int num_classes);
  ~ExternalEvaluator() override;

  // One request, one response. A lost channel is reopened and the request
  // retried once; a second loss yields kTransportFailure. Timeouts and
  // worker-reported errors yield kError.
  EvaluationResult evaluate(const EvaluationJob& job) override;

 private:
  std::unique_ptr<LineChannel> acquire();
  void release(std::unique_ptr<LineChannel> channel);

  EvaluatorSpec spec_;
  InputShape input_shape_;
  int num_classes_;
  std::mutex mutex_;
  std::vector<std::unique_ptr<LineChannel>> idle_;
};

}  // namespace cnnga

#endif  // CNNGA_EXTERNAL_EVALUATOR_HPP_
