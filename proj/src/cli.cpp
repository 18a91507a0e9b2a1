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

#include "cnnga/cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <optional>
#include <regex>

#include "cnnga/architecture.hpp"
#include "cnnga/config.hpp"
#include "cnnga/engine.hpp"
#include "cnnga/errors.hpp"
#include "cnnga/io.hpp"

namespace cnnga {

namespace {

void report(std::ostream& err, const std::string& kind, const std::string& message,
            nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json line = {{"error", kind}, {"message", message}};
  line.update(extra);
  err << line.dump() << '\n';
}

InputShape parse_shape(const std::string& text) {
  static const std::regex pattern(R"((\d+)[x,](\d+)[x,](\d+))");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) {
    throw ConfigError("input", "expected HxWxC, e.g. 32x32x3, got '" + text + "'");
  }
  return {std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3])};
}

struct RunFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::optional<std::string> evaluator;
  std::optional<std::string> out_dir;
  std::optional<std::string> resume;
  std::optional<std::uint64_t> stop_after;
};

int finish(Engine& engine, std::optional<std::uint64_t> stop_after, std::ostream& out) {
  const RunOutcome outcome = engine.run(stop_after);
  write_run_artifacts(engine.config(), outcome);
  const auto& last = outcome.history.back();
  nlohmann::json summary = {
      {"finished", outcome.finished},
      {"generation", last.generation},
      {"best_genome", canonical_serialize(outcome.best.genome())},
      {"best_identifier", outcome.best.id()},
      {"best_fitness", outcome.best.require_fitness()},
      {"checkpoint", engine.checkpoint_path().string()},
  };
  out << summary.dump() << '\n';
  return kExitOk;
}

int resume_from(const std::string& path, std::optional<std::size_t> workers, std::ostream& out) {
  Checkpoint checkpoint = load_checkpoint(path);
  if (checkpoint.finished) {
    out << "run already finished at generation " << checkpoint.state.generation << "; nothing to do\n";
    return kExitOk;
  }
  if (workers) checkpoint.config.workers = *workers;
  checkpoint.config.validate();
  auto evaluator = make_evaluator(checkpoint.config);
  Engine engine(std::move(checkpoint), *evaluator);
  return finish(engine, std::nullopt, out);
}

int cmd_run(const RunFlags& flags, std::ostream& out) {
  if (flags.resume) return resume_from(*flags.resume, flags.workers, out);
  RunConfig config = flags.config_path.empty() ? RunConfig{} : load_run_config(flags.config_path);
  if (flags.seed) config.evolution.rng_seed = *flags.seed;
  if (flags.workers) config.workers = *flags.workers;
  if (flags.out_dir) config.out_dir = *flags.out_dir;
  if (flags.evaluator) {
    if (*flags.evaluator == "surrogate") {
      config.evaluator.kind = EvaluatorKind::kSurrogate;
    } else if (*flags.evaluator == "external") {
      config.evaluator.kind = EvaluatorKind::kExternal;
    } else {
      throw ConfigError("evaluator", "must be surrogate or external");
    }
  }
  config.validate();
  auto evaluator = make_evaluator(config);
  Engine engine(config, *evaluator);
  return finish(engine, flags.stop_after, out);
}

int cmd_decode(const std::string& genome_text, const std::string& shape, int classes, bool count_only,
               std::ostream& out) {
  const Genome genome = parse_genome(genome_text);
  const ArchitectureIR arch = decode(genome, parse_shape(shape), classes);
  const std::int64_t params = count_parameters(arch);
  if (count_only) {
    out << params << '\n';
  } else {
    out << nlohmann::json({{"architecture", to_json(arch)}, {"parameters", params}}).dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_export(const std::string& checkpoint_path, const std::optional<std::string>& out_dir, std::ostream& out) {
  const Checkpoint checkpoint = load_checkpoint(checkpoint_path);
  RunConfig config = checkpoint.config;
  if (out_dir) config.out_dir = *out_dir;
  const Population& pop = checkpoint.state.population;
  if (checkpoint.state.history.empty()) throw CheckpointError("checkpoint holds no evaluated generation");
  const RunOutcome outcome{checkpoint.finished, pop.individuals[best_index(pop.individuals)],
                           checkpoint.state.history};
  write_run_artifacts(config, outcome);
  out << "exported generation " << checkpoint.state.generation << " to " << config.out_dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Evolutionary search for CNN architectures built from skip and pooling layers", "cnnga"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::string> log_level;
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off (default info)")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "critical", "off"}));

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Run a search from a JSON config");
  run->add_option("--config", run_flags.config_path, "Run configuration file (defaults when omitted)");
  run->add_option("--seed", run_flags.seed, "Override rng_seed");
  run->add_option("--workers", run_flags.workers, "Concurrent evaluator slots")->check(CLI::PositiveNumber);
  run->add_option("--evaluator", run_flags.evaluator, "surrogate or external")
      ->check(CLI::IsMember({"surrogate", "external"}));
  run->add_option("--out-dir", run_flags.out_dir, "Directory for artifacts");
  run->add_option("--resume", run_flags.resume, "Continue from a checkpoint instead");
  run->add_option("--stop-after", run_flags.stop_after, "Stop once this many generations are complete");

  std::string resume_path;
  std::optional<std::size_t> resume_workers;
  auto* resume = app.add_subcommand("resume", "Continue a run from its checkpoint");
  resume->add_option("checkpoint,--resume", resume_path, "checkpoint.json")->required();
  resume->add_option("--workers", resume_workers, "Concurrent evaluator slots")->check(CLI::PositiveNumber);

  std::string genome_text;
  std::string shape = "32x32x3";
  int classes = 10;
  auto* decode_cmd = app.add_subcommand("decode", "Print the decoded architecture and its parameter count");
  auto* params_cmd = app.add_subcommand("params", "Print the learnable parameter count of a genome");
  for (auto* cmd : {decode_cmd, params_cmd}) {
    cmd->add_option("genome", genome_text, "Genome text, e.g. S:64:128-P:max")->required();
    cmd->add_option("--input", shape, "Input shape HxWxC")->capture_default_str();
    cmd->add_option("--classes", classes, "Number of classes")->capture_default_str();
  }

  std::string export_path;
  std::optional<std::string> export_dir;
  auto* export_cmd = app.add_subcommand("export", "Write history and best-genome files from a checkpoint");
  export_cmd->add_option("checkpoint", export_path, "checkpoint.json")->required();
  export_cmd->add_option("--out-dir", export_dir, "Destination directory (default: the run's out_dir)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report(err, "usage", e.what());
    return kExitUsage;
  }
  static const bool stderr_logger = [] {
    spdlog::set_default_logger(spdlog::stderr_color_mt("cnnga"));
    return true;
  }();
  (void)stderr_logger;
  if (log_level) spdlog::set_level(spdlog::level::from_str(*log_level));

  try {
    if (*run) return cmd_run(run_flags, out);
    if (*resume) return resume_from(resume_path, resume_workers, out);
    if (*decode_cmd) return cmd_decode(genome_text, shape, classes, false, out);
    if (*params_cmd) return cmd_decode(genome_text, shape, classes, true, out);
    if (*export_cmd) return cmd_export(export_path, export_dir, out);
  } catch (const ConfigError& e) {
    report(err, "config", e.what(), {{"field", e.field()}});
    return kExitUsage;
  } catch (const GenomeParseError& e) {
    report(err, "genome_parse", e.what(), {{"token", e.token()}, {"offset", e.offset()}});
    return kExitGenome;
  } catch (const ValidationError& e) {
    report(err, "genome_invalid", e.what(),
           {{"pool_count", e.report().pool_count}, {"max_pools_allowed", e.report().max_pools_allowed}});
    return kExitGenome;
  } catch (const TransportError& e) {
    report(err, "transport", e.what());
    return kExitTransport;
  } catch (const CheckpointError& e) {
    report(err, "checkpoint", e.what());
    return kExitCheckpoint;
  } catch (const std::exception& e) {
    report(err, "internal", e.what());
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace cnnga
