// Copyright 2026 The cpdqn Authors
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

// cpdqn: instance generation, training, single-instance solving and
// benchmark runs. Failures print one line to stderr and exit nonzero.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cpdqn/bench/bench.h"
#include "cpdqn/core/contract.h"
#include "cpdqn/dqn/trainer.h"
#include "cpdqn/nn/q_network.h"
#include "cpdqn/problems/problems.h"
#include "cpdqn/search/search.h"
#include "json.hpp"

namespace cpdqn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Bad flags or config; reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr int kUsageExit = 2;
constexpr int kFailureExit = 1;
constexpr std::uint64_t kValidationStream = 0x76616c6964617465ULL;

ProblemKind RequireProblem(const std::string& name) {
  const auto kind = ParseProblem(name);
  if (!kind) throw UsageError("unknown problem '" + name + "' (expected COL, MIS or MAXCUT)");
  return *kind;
}

Method RequireMethod(const std::string& name) {
  const auto method = ParseMethod(name);
  if (!method) {
    throw UsageError("unknown method '" + name +
                     "' (expected OPT, DFS-Random, Dive-Learned, ILDS-Learned or Dive-Random)");
  }
  return *method;
}

std::ofstream OpenOutput(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

QNetwork LoadCheckpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read checkpoint '" + path + "'");
  return QNetwork::Load(in);
}

// ---- gen ----

struct GenArgs {
  std::string problem;
  int n = 0;
  int m = 0;
  int count = 0;
  std::uint64_t seed = 0;
  std::string out;
};

void RunGen(const GenArgs& a) {
  const ProblemKind kind = RequireProblem(a.problem);
  if (a.n < 2) throw UsageError("--n must be at least 2");
  if (a.m < 1 || a.m >= a.n) throw UsageError("--m must satisfy 1 <= m < n");
  if (a.count < 1) throw UsageError("--count must be positive");
  fs::create_directories(a.out);
  std::mt19937_64 rng(a.seed);
  for (int i = 0; i < a.count; ++i) {
    const GraphInstance g = GenerateBarabasiAlbert(a.n, a.m, rng());
    std::ostringstream name;
    name << ProblemName(kind) << "_n" << a.n << "_m" << a.m << "_" << std::setw(4)
         << std::setfill('0') << i << ".txt";
    std::ofstream out = OpenOutput(fs::path(a.out) / name.str());
    WriteInstance(out, g);
  }
}

// ---- train ----

struct TrainArgs {
  std::string problem;
  std::string size_preset = "small";
  std::string config;
  std::string out_checkpoint;
  std::string curve;
};

struct TrainSetup {
  TrainConfig train;
  int validation_instances = 20;
};

template <typename T>
T Field(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError("config field '" + key + "': " + e.what());
  }
}

RewardScheme ParseReward(const std::string& s) {
  if (s == "propagation") return RewardScheme::kPropagationBased;
  if (s == "score") return RewardScheme::kScoreOnly;
  throw UsageError("config field 'reward': expected 'propagation' or 'score'");
}

EpisodeStyle ParseStyle(const std::string& s) {
  if (s == "dive") return EpisodeStyle::kDive;
  if (s == "full-dfs") return EpisodeStyle::kFullDfs;
  throw UsageError("config field 'episode_style': expected 'dive' or 'full-dfs'");
}

Pooling ParsePoolingName(const std::string& s) {
  if (s == "mean") return Pooling::kMean;
  if (s == "sum") return Pooling::kSum;
  throw UsageError("config field 'pooling': expected 'mean' or 'sum'");
}

TrainSetup ParseTrainConfig(const json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  static const std::set<std::string> kKnown = {
      "episodes",        "seed",          "capacity",
      "warmup",          "batch_size",    "target_sync_period",
      "epsilon_start",   "epsilon_end",   "epsilon_decay_steps",
      "learning_rate",   "reward",        "episode_style",
      "full_dfs_node_limit", "eval_period", "patience",
      "embedding_dim",   "decoder_dim",   "layers",
      "pooling",         "slope",         "hidden",
      "validation_instances"};
  for (const auto& [key, value] : j.items()) {
    if (!kKnown.count(key)) throw UsageError("unknown config field '" + key + "'");
  }
  for (const char* key : {"episodes", "seed"}) {
    if (!j.contains(key)) throw UsageError(std::string("missing config field '") + key + "'");
  }
  TrainSetup s;
  TrainConfig& c = s.train;
  c.episodes = Field<int>(j, "episodes");
  c.seed = Field<std::uint64_t>(j, "seed");
  auto opt = [&j](const char* key, auto& target) {
    if (j.contains(key)) target = Field<std::decay_t<decltype(target)>>(j, key);
  };
  opt("capacity", c.capacity);
  opt("warmup", c.warmup);
  opt("batch_size", c.batch_size);
  opt("target_sync_period", c.target_sync_period);
  opt("epsilon_start", c.epsilon.start);
  opt("epsilon_end", c.epsilon.end);
  opt("epsilon_decay_steps", c.epsilon.decay_steps);
  opt("learning_rate", c.learning_rate);
  opt("full_dfs_node_limit", c.full_dfs_node_limit);
  opt("eval_period", c.eval_period);
  opt("embedding_dim", c.network.embedding_dim);
  opt("decoder_dim", c.network.decoder_dim);
  opt("layers", c.network.layers);
  opt("slope", c.network.slope);
  opt("hidden", c.network.hidden);
  opt("validation_instances", s.validation_instances);
  if (j.contains("reward")) c.reward = ParseReward(Field<std::string>(j, "reward"));
  if (j.contains("episode_style")) c.style = ParseStyle(Field<std::string>(j, "episode_style"));
  if (j.contains("pooling")) c.network.pooling = ParsePoolingName(Field<std::string>(j, "pooling"));
  if (j.contains("patience")) c.patience = Field<int>(j, "patience");
  if (s.validation_instances < 1) throw UsageError("config field 'validation_instances' must be positive");
  try {
    c.Validate();
  } catch (const ContractViolation& e) {
    throw UsageError(std::string("invalid config: ") + e.what());
  }
  return s;
}

void RunTrain(const TrainArgs& a) {
  const ProblemKind kind = RequireProblem(a.problem);
  const auto preset = LookupSizePreset(kind, a.size_preset);
  if (!preset) {
    throw UsageError("no size preset '" + a.size_preset + "' for " +
                     std::string(ProblemName(kind)));
  }
  std::ifstream in(a.config);
  if (!in) throw UsageError("cannot read config '" + a.config + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("config '" + a.config + "' is not valid JSON: " + e.what());
  }
  const TrainSetup setup = ParseTrainConfig(j);

  std::mt19937_64 vrng(setup.train.seed ^ kValidationStream);
  std::vector<ProblemModel> problems;
  std::vector<Model> validation;
  for (int i = 0; i < setup.validation_instances; ++i) {
    problems.push_back(
        BuildModel(GenerateBarabasiAlbert(preset->nodes, preset->attachment, vrng()), kind));
    validation.push_back(problems.back().model);
  }
  const ProblemModel& scale = problems.front();
  TrainHooks hooks;
  hooks.report = [&scale](int z) { return scale.Report(z); };
  const SizePreset p = *preset;
  const TrainResult result = Train(
      setup.train,
      [p, kind](std::mt19937_64& rng) {
        return BuildModel(GenerateBarabasiAlbert(p.nodes, p.attachment, rng()), kind).model;
      },
      validation, hooks);

  std::ofstream ck = OpenOutput(a.out_checkpoint);
  result.best.Save(ck);
  if (!ck.flush()) throw std::runtime_error("failed writing '" + a.out_checkpoint + "'");
  std::ofstream curve = OpenOutput(a.curve);
  WriteCurve(curve, result.curve);
  if (!curve.flush()) throw std::runtime_error("failed writing '" + a.curve + "'");
}

// ---- solve ----

struct SolveArgs {
  std::string instance;
  std::string problem;
  std::string method;
  std::string checkpoint;
  std::optional<std::int64_t> budget;
  std::uint64_t seed = 0;
  std::optional<double> opt;
};

template <typename T>
void PrintOptional(std::ostream& out, const std::optional<T>& v) {
  if (v) {
    out << *v;
  } else {
    out << "none";
  }
}

void RunSolve(const SolveArgs& a) {
  const ProblemKind kind = RequireProblem(a.problem);
  const Method method = RequireMethod(a.method);
  if (UsesNetwork(method) && a.checkpoint.empty()) {
    throw UsageError("--checkpoint is required for " + std::string(MethodName(method)));
  }
  if (a.budget && *a.budget <= 0) throw UsageError("--budget must be positive");
  const GraphInstance g = LoadInstance(a.instance);
  std::optional<QNetwork> net;
  if (UsesNetwork(method)) net = LoadCheckpoint(a.checkpoint);
  const auto budget = UsesBudget(method) ? a.budget : std::nullopt;
  const MethodOutcome out =
      RunMethod(g, kind, method, net ? &*net : nullptr, budget, a.seed);
  std::cout.precision(17);
  std::cout << "method=" << MethodName(method) << " objective=";
  PrintOptional(std::cout, out.objective);
  if (a.opt) {
    std::cout << " gap=";
    PrintOptional(std::cout, OptimalityGap(out.objective, *a.opt));
  }
  std::cout.precision(6);
  std::cout << " nodes=" << out.nodes << " time_to_best=" << out.time_to_best
            << " proved_optimal=" << (out.proved_optimal ? 1 : 0) << "\n";
}

// ---- bench ----

struct BenchArgs {
  std::string instances_dir;
  std::string problem;
  std::vector<std::string> methods = {"DFS-Random", "Dive-Learned", "ILDS-Learned"};
  std::vector<std::int64_t> budgets = {100};
  std::string checkpoint;
  std::string out;
  std::uint64_t seed = 0;
  double tau_max = 3.0;
  double tau_step = 0.05;
};

int WorkersFromEnv() {
  const char* raw = std::getenv("CPDQN_WORKERS");
  if (raw == nullptr || *raw == '\0') return 1;
  char* end = nullptr;
  const long v = std::strtol(raw, &end, 10);
  if (*end != '\0' || v < 1 || v > 256) throw UsageError("CPDQN_WORKERS must be in [1, 256]");
  return static_cast<int>(v);
}

void RunBenchCommand(const BenchArgs& a) {
  BenchConfig config;
  config.kind = RequireProblem(a.problem);
  for (const std::string& m : a.methods) config.methods.push_back(RequireMethod(m));
  for (std::int64_t b : a.budgets) {
    if (b <= 0) throw UsageError("--budgets must be positive");
  }
  config.budgets = a.budgets;
  config.seed = a.seed;
  config.workers = WorkersFromEnv();
  if (a.tau_max < 1.0 || a.tau_step <= 0.0) {
    throw UsageError("--tau-max must be >= 1 and --tau-step > 0");
  }
  const bool learned = std::any_of(config.methods.begin(), config.methods.end(), UsesNetwork);
  if (learned && a.checkpoint.empty()) {
    throw UsageError("--checkpoint is required for learned methods");
  }

  if (!fs::is_directory(a.instances_dir)) {
    throw UsageError("--instances-dir '" + a.instances_dir + "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(a.instances_dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no instance files in '" + a.instances_dir + "'");
  std::vector<NamedInstance> instances;
  for (const fs::path& f : files) {
    instances.push_back({f.stem().string(), LoadInstance(f.string())});
  }

  std::optional<QNetwork> net;
  if (learned) net = LoadCheckpoint(a.checkpoint);
  const BenchReport report = RunBench(instances, config, net ? &*net : nullptr);

  fs::create_directories(a.out);
  const fs::path dir(a.out);
  std::ofstream report_out = OpenOutput(dir / "report.csv");
  WriteReport(report_out, report);
  std::ofstream summary_out = OpenOutput(dir / "summary.csv");
  WriteSummary(summary_out, report);
  std::ofstream profile_out = OpenOutput(dir / "profile.csv");
  const std::vector<double> taus = TauGrid(a.tau_max, a.tau_step);
  WriteProfile(profile_out, PerformanceProfile(report, taus));
  std::ofstream timings_out = OpenOutput(dir / "timings.csv");
  WriteTimings(timings_out, report);
  for (std::ofstream* s : {&report_out, &summary_out, &profile_out, &timings_out}) {
    if (!s->flush()) throw std::runtime_error("failed writing bench outputs to '" + a.out + "'");
  }
}

// CLI11 messages can span lines; keep the first one.
std::string FirstLine(const std::string& s) { return s.substr(0, s.find('\n')); }

int Main(int argc, char** argv) {
  CLI::App app{"cpdqn: CP solving with a learned value-selection heuristic"};
  app.require_subcommand(1);

  GenArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate Barabasi-Albert instances");
  gen_cmd->add_option("--problem", gen.problem, "COL, MIS or MAXCUT")->required();
  gen_cmd->add_option("--n", gen.n, "Nodes per graph")->required();
  gen_cmd->add_option("--m", gen.m, "Edges attached per new node")->required();
  gen_cmd->add_option("--count", gen.count, "Number of instances")->required();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->required();
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a value-selection network");
  train_cmd->add_option("--problem", train.problem, "COL, MIS or MAXCUT")->required();
  train_cmd->add_option("--size-preset", train.size_preset, "small, medium or large")
      ->capture_default_str();
  train_cmd->add_option("--config", train.config, "JSON training config")->required();
  train_cmd->add_option("--out-checkpoint", train.out_checkpoint, "Checkpoint path")
      ->required();
  train_cmd->add_option("--curve", train.curve, "Training curve CSV path")->required();

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  solve_cmd->add_option("--instance", solve.instance, "Instance file")->required();
  solve_cmd->add_option("--problem", solve.problem, "COL, MIS or MAXCUT")->required();
  solve_cmd->add_option("--method", solve.method, "Search method")->required();
  solve_cmd->add_option("--checkpoint", solve.checkpoint, "Checkpoint for learned methods");
  solve_cmd->add_option("--budget", solve.budget, "Node budget (unlimited if omitted)");
  solve_cmd->add_option("--seed", solve.seed, "Seed for random value ordering");
  solve_cmd->add_option("--opt", solve.opt, "Known optimum, enables the gap column");

  BenchArgs bench;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Benchmark methods against OPT");
  bench_cmd->add_option("--instances-dir", bench.instances_dir, "Directory of instances")
      ->required();
  bench_cmd->add_option("--problem", bench.problem, "COL, MIS or MAXCUT")->required();
  bench_cmd->add_option("--methods", bench.methods, "Comma-separated methods")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--budgets", bench.budgets, "Comma-separated node budgets")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--checkpoint", bench.checkpoint, "Checkpoint for learned methods");
  bench_cmd->add_option("--out", bench.out, "Output directory")->required();
  bench_cmd->add_option("--seed", bench.seed, "Base seed")->capture_default_str();
  bench_cmd->add_option("--tau-max", bench.tau_max, "Largest profile ratio")
      ->capture_default_str();
  bench_cmd->add_option("--tau-step", bench.tau_step, "Profile grid step")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "cpdqn: " << FirstLine(e.what()) << "\n";
    return kUsageExit;
  }

  try {
    if (*gen_cmd) RunGen(gen);
    if (*train_cmd) RunTrain(train);
    if (*solve_cmd) RunSolve(solve);
    if (*bench_cmd) RunBenchCommand(bench);
  } catch (const UsageError& e) {
    std::cerr << "cpdqn: " << FirstLine(e.what()) << "\n";
    return kUsageExit;
  } catch (const std::exception& e) {
    std::cerr << "cpdqn: " << FirstLine(e.what()) << "\n";
    return kFailureExit;
  }
  return 0;
}

}  // namespace
}  // namespace cpdqn

int main(int argc, char** argv) { return cpdqn::Main(argc, argv); }
