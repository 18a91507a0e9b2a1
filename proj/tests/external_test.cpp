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

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "cnnga/engine.hpp"
#include "cnnga/external_evaluator.hpp"
#include "cnnga/io.hpp"
#include "support/fixtures.hpp"

namespace cnnga {
namespace {

std::string worker(const std::string& flags = "") { return std::string(CNNGA_ECHO_WORKER) + " " + flags; }

ExternalEvaluator external(const std::string& command, double timeout = 0.0) {
  EvaluatorSpec spec;
  spec.kind = EvaluatorKind::kExternal;
  spec.command = command;
  spec.timeout_seconds = timeout;
  return ExternalEvaluator(spec, InputShape{}, 10);
}

EvaluationJob job(const std::string& id, const std::string& genome) { return {id, parse_genome(genome), 1, 7}; }

std::vector<std::string> lines_of(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  std::vector<std::string> out;
  std::istringstream in(read_file(path));
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST_CASE("request lines carry the genome and its architecture") {
  const EvaluationJob j{"g3-q-4", parse_genome("S:64:128-P:max"), 2, 123456789012345ULL};
  const ArchitectureIR arch = decode(j.genome, InputShape{}, 10);
  const std::string line = wire::encode_request(j, arch, "cifar10");
  CHECK(line.find('\n') == std::string::npos);
  const wire::Request r = wire::decode_request(line);
  CHECK(r.job_id == "g3-q-4");
  CHECK(r.genome == "S:64:128-P:max");
  CHECK(r.epochs == 2);
  CHECK(r.seed == 123456789012345ULL);
  CHECK(r.dataset == "cifar10");
  CHECK(architecture_from_json(r.arch) == arch);
  CHECK_THROWS_AS(wire::decode_request("[1, 2]"), std::invalid_argument);
  CHECK_THROWS_AS(wire::decode_request(R"({"job_id": "a"})"), std::invalid_argument);
}

TEST_CASE("responses are checked before they are trusted") {
  auto decoded = [](const std::string& line) { return wire::decode_response(line, "j1"); };
  const auto ok = decoded(R"({"job_id": "j1", "status": "ok", "fitness": 0.75})");
  CHECK(ok.status == ResultStatus::kOk);
  CHECK(ok.fitness == 0.75);
  const auto err = decoded(R"({"job_id": "j1", "status": "error", "message": "nan loss"})");
  CHECK(err.status == ResultStatus::kError);
  CHECK(err.message == "nan loss");
  for (const char* bad : {"not json", R"({"job_id": "j2", "status": "ok", "fitness": 0.5})",
                          R"({"job_id": "j1", "status": "ok", "fitness": 1.5})", R"({"job_id": "j1", "status": "ok"})",
                          R"({"job_id": "j1", "status": "done", "fitness": 0.5})", R"({"status": "ok"})"}) {
    const auto r = decoded(bad);
    CHECK(r.status == ResultStatus::kError);
    CHECK(r.job_id == "j1");
    CHECK(r.message.find("malformed") != std::string::npos);
  }
  const auto round = wire::decode_response(wire::encode_response(EvaluationResult::ok("j1", 0.125)), "j1");
  CHECK(round.status == ResultStatus::kOk);
  CHECK(round.fitness == 0.125);
}

TEST_CASE("child-process worker answers and is reused") {
  testing::TempDir dir("echo");
  auto evaluator = external(worker("--log " + (dir / "log").string()));
  for (const char* g : {"S:64:128", "S:64:64-P:max", "S:128:64-P:mean-S:64:256"}) {
    const EvaluationResult r = evaluator.evaluate(job(std::string("id-") + g, g));
    CHECK(r.status == ResultStatus::kOk);
    CHECK(r.job_id == std::string("id-") + g);
    CHECK(r.fitness == doctest::Approx(surrogate_fitness(parse_genome(g))).epsilon(1e-12));
  }
  const auto log = lines_of(dir / "log");
  CHECK(log.size() == 3);
  std::set<std::string> pids;
  for (const auto& line : log) pids.insert(line.substr(0, line.find(' ')));
  CHECK(pids.size() == 1);
}

TEST_CASE("worker-side failures become penalizable errors") {
  auto errors = external(worker("--mode error"));
  const auto e = errors.evaluate(job("a", "S:64:64"));
  CHECK(e.status == ResultStatus::kError);
  CHECK(e.message == "CUDA out of memory");

  auto garbage = external(worker("--mode malformed"));
  CHECK(garbage.evaluate(job("b", "S:64:64")).status == ResultStatus::kError);

  auto confused = external(worker("--mode wrong-id"));
  const auto w = confused.evaluate(job("c", "S:64:64"));
  CHECK(w.status == ResultStatus::kError);
  CHECK(w.message.find("does not match") != std::string::npos);

  auto never = external("/nonexistent/trainer");
  const auto invalid = never.evaluate(job("d", "P:max-P:max-P:max-P:max-P:max-P:max"));
  CHECK(invalid.status == ResultStatus::kError);
}

TEST_CASE("a slow worker times out") {
  auto evaluator = external(worker("--sleep 3"), 0.2);
  const auto start = std::chrono::steady_clock::now();
  const auto r = evaluator.evaluate(job("slow", "S:64:64"));
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(r.status == ResultStatus::kError);
  CHECK(r.message.find("timed out") != std::string::npos);
  CHECK(elapsed < 2.0);
}

TEST_CASE("a lost worker is restarted once") {
  testing::TempDir dir("retry");
  const std::string flags = "--log " + (dir / "log").string();
  auto recovering = external(worker(flags + " --die-first " + (dir / "marker").string()));
  const auto r = recovering.evaluate(job("r1", "S:64:128"));
  CHECK(r.status == ResultStatus::kOk);
  CHECK(lines_of(dir / "log").size() == 2);

  std::filesystem::remove(dir / "log");
  auto dead = external(worker(flags + " --mode die"));
  const auto d = dead.evaluate(job("r2", "S:64:128"));
  CHECK(d.status == ResultStatus::kTransportFailure);
  CHECK(lines_of(dir / "log").size() == 2);

  auto missing = external("/nonexistent/trainer");
  CHECK(missing.evaluate(job("r3", "S:64:64")).status == ResultStatus::kTransportFailure);
}

TEST_CASE("one request per unique identifier under concurrency") {
  testing::TempDir dir("pool");
  auto evaluator = external(worker("--log " + (dir / "log").string()));
  Population pop;
  std::mt19937 gen(19);
  std::set<Identifier> unique;
  while (pop.size() < 24) {
    Genome g = testing::arbitrary_genome(gen, 6);
    if (!validate(g, 32).valid) continue;
    unique.insert(identifier(g));
    pop.individuals.emplace_back(g);
    if (pop.size() % 4 == 0) pop.individuals.emplace_back(pop.individuals.front().genome());
  }
  FitnessCache cache;
  const auto stats = evaluate_population(pop, evaluator, cache, {InputShape{}, 10, 1, 0.0, 3, "g1-p"}, 4);
  const auto log = lines_of(dir / "log");
  CHECK(log.size() == unique.size());
  CHECK(stats.cache_misses == unique.size());
  std::set<std::string> job_ids;
  for (const auto& line : log) job_ids.insert(line.substr(line.find(' ') + 1, line.rfind(' ') - line.find(' ') - 1));
  CHECK(job_ids.size() == log.size());
  for (const auto& ind : pop.individuals) {
    CHECK(*ind.fitness() == doctest::Approx(surrogate_fitness(ind.genome())).epsilon(1e-12));
  }
}

// Minimal TCP worker: accepts connections and answers with the surrogate.
class TcpWorker {
 public:
  TcpWorker() {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    REQUIRE(::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
    REQUIRE(::listen(fd_, 8) == 0);
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
    thread_ = std::jthread([this] { serve(); });
  }
  ~TcpWorker() {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
  }
  std::string endpoint() const { return "127.0.0.1:" + std::to_string(port_); }
  int requests() const { return requests_; }

 private:
  void serve() {
    while (true) {
      const int conn = ::accept(fd_, nullptr, nullptr);
      if (conn < 0) return;
      std::string buffer;
      char chunk[4096];
      ssize_t n;
      while ((n = ::read(conn, chunk, sizeof chunk)) > 0) {
        buffer.append(chunk, static_cast<std::size_t>(n));
        for (auto nl = buffer.find('\n'); nl != std::string::npos; nl = buffer.find('\n')) {
          const wire::Request r = wire::decode_request(buffer.substr(0, nl));
          buffer.erase(0, nl + 1);
          ++requests_;
          const std::string reply =
              wire::encode_response(EvaluationResult::ok(r.job_id, surrogate_fitness(parse_genome(r.genome)))) + "\n";
          (void)!::write(conn, reply.data(), reply.size());
        }
      }
      ::close(conn);
    }
  }

  int fd_ = -1;
  int port_ = 0;
  std::atomic<int> requests_{0};
  std::jthread thread_;
};

TEST_CASE("TCP worker endpoint") {
  TcpWorker server;
  EvaluatorSpec spec;
  spec.kind = EvaluatorKind::kExternal;
  spec.endpoint = server.endpoint();
  ExternalEvaluator evaluator(spec, InputShape{}, 10);
  const auto r = evaluator.evaluate(job("t1", "S:64:64-P:max"));
  CHECK(r.status == ResultStatus::kOk);
  CHECK(r.fitness == surrogate_fitness(parse_genome("S:64:64-P:max")));
  CHECK(evaluator.evaluate(job("t2", "S:64:128")).status == ResultStatus::kOk);
  CHECK(server.requests() == 2);

  spec.endpoint = "127.0.0.1:1";
  ExternalEvaluator refused(spec, InputShape{}, 10);
  CHECK(refused.evaluate(job("t3", "S:64:64")).status == ResultStatus::kTransportFailure);
}

TEST_CASE("external and in-process surrogate runs agree") {
  testing::TempDir dir("agree");
  RunConfig config;
  config.evolution.population_size = 8;
  config.evolution.max_generations = 4;
  config.evolution.rng_seed = 31;
  config.workers = 3;
  config.out_dir = dir.path() / "surrogate";
  SurrogateEvaluator surrogate;
  const RunOutcome a = run_search(config, surrogate);

  config.out_dir = dir.path() / "external";
  config.evaluator.kind = EvaluatorKind::kExternal;
  config.evaluator.command = worker();
  auto evaluator = make_evaluator(config);
  const RunOutcome b = run_search(config, *evaluator);
  CHECK(history_csv(a.history) == history_csv(b.history));
}

}  // namespace
}  // namespace cnnga
