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

// Stand-in trainer speaking the line protocol on stdin/stdout. Fitness is the
// surrogate formula recomputed from the genome text.

#include <CLI11.hpp>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <thread>

namespace {

double surrogate(const std::string& genome) {
  double skips = 0, pools = 0, widening = 0;
  std::stringstream in(genome);
  std::string token;
  while (std::getline(in, token, '-')) {
    if (token[0] == 'P') {
      ++pools;
      continue;
    }
    ++skips;
    const auto second = token.find(':', 2);
    if (std::stoi(token.substr(second + 1)) >= std::stoi(token.substr(2, second - 2))) ++widening;
  }
  const double q = skips > 0 ? widening / skips : 0.0;
  const double v = 0.5 * std::exp(-(skips - 8) * (skips - 8) / 8) + 0.3 * std::exp(-(pools - 3) * (pools - 3) / 2) +
                   0.2 * q;
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"line-protocol echo worker for tests"};
  std::string mode = "ok";
  std::string log_path;
  std::string die_first;
  double sleep_seconds = 0.0;
  app.add_option("--mode", mode)->check(CLI::IsMember({"ok", "error", "malformed", "wrong-id", "die"}));
  app.add_option("--log", log_path, "append one line per request");
  app.add_option("--die-first", die_first, "exit on the first request unless this marker exists");
  app.add_option("--sleep", sleep_seconds, "delay before each reply");
  CLI11_PARSE(app, argc, argv);

  std::string line;
  while (std::getline(std::cin, line)) {
    const auto request = nlohmann::json::parse(line);
    const std::string job_id = request.at("job_id");
    if (!log_path.empty()) {
      std::ofstream(log_path, std::ios::app) << ::getpid() << ' ' << job_id << ' '
                                             << request.at("genome").get<std::string>() << '\n';
    }
    if (mode == "die") return 1;
    if (!die_first.empty() && !std::filesystem::exists(die_first)) {
      std::ofstream(die_first) << "died\n";
      return 1;
    }
    if (sleep_seconds > 0) std::this_thread::sleep_for(std::chrono::duration<double>(sleep_seconds));
    nlohmann::json reply = {{"job_id", job_id}};
    if (mode == "ok") {
      reply["status"] = "ok";
      reply["fitness"] = surrogate(request.at("genome"));
    } else if (mode == "error") {
      reply["status"] = "error";
      reply["message"] = "CUDA out of memory";
    } else if (mode == "wrong-id") {
      reply["job_id"] = job_id + "-other";
      reply["status"] = "ok";
      reply["fitness"] = 0.5;
    } else {
      std::cout << "{\"job_id\": " << std::endl;
      continue;
    }
    std::cout << reply.dump() << std::endl;
  }
  return 0;
}
