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

#include "cnnga/external_evaluator.hpp"

#include <chrono>
#include <cmath>

#include "cnnga/errors.hpp"

namespace cnnga {

void EvaluatorSpec::validate() const {
  if (epochs < 1) throw ConfigError("evaluator.epochs", "must be at least 1");
  if (!(timeout_seconds >= 0.0)) throw ConfigError("evaluator.timeout_seconds", "must be non-negative");
  if (kind == EvaluatorKind::kExternal && command.empty() && endpoint.empty()) {
    throw ConfigError("evaluator.command", "external evaluator needs a command or an endpoint");
  }
}

namespace wire {

std::string encode_request(const EvaluationJob& job, const ArchitectureIR& arch,
                           const std::string& dataset) {
  const nlohmann::json request = {
      {"job_id", job.job_id},
      {"genome", canonical_serialize(job.genome)},
      {"arch", to_json(arch)},
      {"epochs", job.epochs},
      {"seed", job.seed},
      {"dataset", dataset},
  };
  return request.dump();
}

Request decode_request(std::string_view line) {
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw std::invalid_argument("request is not a JSON object");
  try {
    Request r;
    r.job_id = j.at("job_id").get<std::string>();
    r.genome = j.at("genome").get<std::string>();
    r.arch = j.at("arch");
    r.epochs = j.at("epochs").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.dataset = j.value("dataset", std::string());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed request: ") + e.what());
  }
}

std::string encode_response(const EvaluationResult& result) {
  nlohmann::json response = {{"job_id", result.job_id}};
  if (result.status == ResultStatus::kOk) {
    response["status"] = "ok";
    response["fitness"] = result.fitness;
  } else {
    response["status"] = "error";
  }
  if (!result.message.empty()) response["message"] = result.message;
  return response.dump();
}

EvaluationResult decode_response(std::string_view line, const std::string& expected_job_id) {
  const auto malformed = [&](const std::string& why) {
    return EvaluationResult::error(expected_job_id, "malformed response: " + why);
  };
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return malformed("not a JSON object");
  const auto id = j.find("job_id");
  if (id == j.end() || !id->is_string()) return malformed("missing job_id");
  if (id->get<std::string>() != expected_job_id) {
    return malformed("job_id '" + id->get<std::string>() + "' does not match '" + expected_job_id + "'");
  }
  std::string message;
  if (auto m = j.find("message"); m != j.end() && m->is_string()) message = m->get<std::string>();
  const auto status = j.find("status");
  if (status == j.end() || !status->is_string()) return malformed("missing status");
  if (*status == "error") {
    return EvaluationResult::error(expected_job_id, message.empty() ? "worker reported an error" : message);
  }
  if (*status != "ok") return malformed("unknown status " + status->dump());
  const auto fitness = j.find("fitness");
  if (fitness == j.end() || !fitness->is_number()) return malformed("status ok without numeric fitness");
  const double value = fitness->get<double>();
  if (!(value >= 0.0 && value <= 1.0)) return malformed("fitness " + fitness->dump() + " outside [0, 1]");
  EvaluationResult result = EvaluationResult::ok(expected_job_id, value);
  result.message = std::move(message);
  return result;
}

}  // namespace wire

ExternalEvaluator::ExternalEvaluator(EvaluatorSpec spec, InputShape input_shape, int num_classes)
    : spec_(std::move(spec)), input_shape_(input_shape), num_classes_(num_classes) {
  spec_.kind = EvaluatorKind::kExternal;
  spec_.validate();
}

ExternalEvaluator::~ExternalEvaluator() = default;

std::unique_ptr<LineChannel> ExternalEvaluator::acquire() {
  {
    std::lock_guard lock(mutex_);
    if (!idle_.empty()) {
      auto channel = std::move(idle_.back());
      idle_.pop_back();
      return channel;
    }
  }
  if (!spec_.endpoint.empty()) return connect_tcp_channel(spec_.endpoint);
  return spawn_child_channel(spec_.command);
}

void ExternalEvaluator::release(std::unique_ptr<LineChannel> channel) {
  std::lock_guard lock(mutex_);
  idle_.push_back(std::move(channel));
}

EvaluationResult ExternalEvaluator::evaluate(const EvaluationJob& job) {
  std::string request;
  try {
    request = wire::encode_request(job, decode(job.genome, input_shape_, num_classes_), spec_.dataset);
  } catch (const std::exception& e) {
    return EvaluationResult::error(job.job_id, std::string("cannot decode genome: ") + e.what());
  }
  const auto timeout = std::chrono::milliseconds(
      static_cast<std::int64_t>(std::llround(spec_.timeout_seconds * 1000.0)));

  std::string failure;
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::unique_ptr<LineChannel> channel;
    try {
      channel = acquire();
      channel->write_line(request);
      std::string line;
      switch (channel->read_line(line, timeout)) {
        case ReadStatus::kLine: {
          EvaluationResult result = wire::decode_response(line, job.job_id);
          release(std::move(channel));
          return result;
        }
        case ReadStatus::kTimeout:
          // The late reply would desynchronize the channel; drop it.
          return EvaluationResult::error(
              job.job_id, "worker timed out after " + std::to_string(spec_.timeout_seconds) + " s");
        case ReadStatus::kClosed:
          failure = "worker closed the connection";
          break;
      }
    } catch (const TransportError& e) {
      failure = e.what();
    }
  }
  return EvaluationResult::error(job.job_id, "transport failure after retry: " + failure,
                                 ResultStatus::kTransportFailure);
}

}  // namespace cnnga
