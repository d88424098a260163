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

// Acceptance suite. Prints one PASS/FAIL line per criterion; exits nonzero if
// any selected criterion fails.
//
//   acceptance [--criterion N]... [--out DIR]

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cpdqn/bench/bench.h"
#include "cpdqn/core/model.h"
#include "cpdqn/core/propagators.h"
#include "cpdqn/dqn/trainer.h"
#include "cpdqn/problems/problems.h"
#include "cpdqn/rl/environment.h"
#include "cpdqn/rl/reward.h"
#include "cpdqn/search/discrepancy_search.h"
#include "cpdqn/search/search.h"
#include "support/binary_tree.h"
#include "support/cli_runner.h"
#include "support/gradient_check.h"
#include "support/oracles.h"

namespace cpdqn {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

// Collects failed checks for one criterion; the first few are echoed.
class Checks {
 public:
  void That(bool ok, const std::string& what) {
    ++total_;
    if (ok) return;
    ++failed_;
    if (failed_ <= 5) std::cout << "  failed: " << what << "\n";
  }
  bool ok() const { return failed_ == 0; }
  std::string Summary() const {
    return std::to_string(total_ - failed_) + "/" + std::to_string(total_) + " checks";
  }

 private:
  long total_ = 0;
  long failed_ = 0;
};

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string Fmt(double x, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

Verdict WithinTime(const Checks& checks, Clock::time_point start, double limit_seconds) {
  const double t = Seconds(start);
  return {checks.ok() && t < limit_seconds,
          checks.Summary() + ", " + Fmt(t, 3) + " s (limit " + Fmt(limit_seconds) + " s)"};
}

std::vector<int> OpenVariables(const Model& m) {
  std::vector<int> open;
  for (int v = 0; v < m.num_variables(); ++v) {
    if (m.domain(v).size() > 1) open.push_back(v);
  }
  return open;
}

// ---- 1: solver core properties ----

Verdict SolverCore() {
  const auto start = Clock::now();
  Checks checks;
  using testing::Snapshot;

  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 1000; ++trial) {
    Model m = testing::RandomSmallModel(rng);
    auto before = Snapshot(m);
    for (int step = 0; step < 6; ++step) {
      if (m.FixPoint() == PropagationStatus::kFailed) break;
      const auto after = Snapshot(m);
      bool monotone = true;
      for (std::size_t v = 0; v < after.size(); ++v) {
        monotone = monotone && std::includes(before[v].begin(), before[v].end(),
                                             after[v].begin(), after[v].end());
      }
      checks.That(monotone, "fix point is monotone");
      m.FixPoint();
      checks.That(Snapshot(m) == after, "fix point is idempotent");
      const auto open = OpenVariables(m);
      if (open.empty()) break;
      const int v = open[rng() % open.size()];
      const auto values = m.domain(v).SortedValues();
      before = Snapshot(m);
      m.Assign(v, values[rng() % values.size()]);
    }
  }

  for (int trial = 0; trial < 1000; ++trial) {
    const Model base = testing::RandomSmallModel(rng, 5, 6);
    Model fifo = base;
    const auto status = fifo.FixPoint();
    for (int order = 0; order < 5; ++order) {
      Model shuffled = base;
      std::mt19937_64 queue_rng(trial * 31 + order);
      const bool same_status = shuffled.FixPoint(&queue_rng) == status;
      checks.That(same_status, "fix point status is order independent");
      if (same_status && status == PropagationStatus::kConsistent) {
        checks.That(Snapshot(shuffled) == Snapshot(fifo), "fix point is order independent");
      }
    }
  }

  for (int trial = 0; trial < 1000; ++trial) {
    Model m = testing::RandomSmallModel(rng);
    std::vector<std::pair<Checkpoint, Model>> live;
    for (int op = 0; op < 40; ++op) {
      switch (rng() % 4) {
        case 0:
          live.emplace_back(m.PushCheckpoint(), m);
          break;
        case 1: {
          std::vector<int> nonempty;
          for (int v = 0; v < m.num_variables(); ++v) {
            if (!m.domain(v).empty()) nonempty.push_back(v);
          }
          if (nonempty.empty()) break;
          const int v = nonempty[rng() % nonempty.size()];
          const auto values = m.domain(v).SortedValues();
          m.Assign(v, values[rng() % values.size()]);
          break;
        }
        case 2:
          m.FixPoint();
          break;
        case 3: {
          if (live.empty()) break;
          const std::size_t i = rng() % live.size();
          m.Restore(live[i].first);
          const Model& shadow = live[i].second;
          bool same = Snapshot(m) == Snapshot(shadow) && m.failed() == shadow.failed();
          for (int c = 0; c < m.num_constraints(); ++c) {
            same = same && m.reduced_domains(c) == shadow.reduced_domains(c);
          }
          checks.That(same, "trail restore equals the shadow copy");
          live.resize(i);
          break;
        }
      }
    }
  }

  for (int trial = 0; trial < 5000; ++trial) {
    Model m = testing::RandomSmallModel(rng, 4, 1);
    const Constraint& c = m.constraint(0);
    if (c.scope.size() > 4) continue;
    const auto supported = testing::SupportedValues(m, c);
    Propagate(m, c);
    bool sound = true;
    for (int v : c.scope) {
      for (int value : supported[v]) sound = sound && m.domain(v).contains(value);
    }
    checks.That(sound, "propagator keeps every supported value");
  }
  return WithinTime(checks, start, 120.0);
}

// ---- 2: DFS-Random agrees with brute force ----

Verdict OracleEquivalence() {
  const auto start = Clock::now();
  Checks checks;
  std::mt19937_64 rng(202);
  for (ProblemKind kind :
       {ProblemKind::kColoring, ProblemKind::kIndependentSet, ProblemKind::kMaxCut}) {
    for (int i = 0; i < 50; ++i) {
      const int n = 3 + static_cast<int>(rng() % 10);
      const int m = 1 + static_cast<int>(rng() % std::min(4, n - 1));
      const GraphInstance g = GenerateBarabasiAlbert(n, m, rng());
      const MethodOutcome out =
          RunMethod(g, kind, Method::kDfsRandom, nullptr, std::nullopt, rng());
      const double want = testing::BruteForceReported(g, kind);
      checks.That(out.objective && *out.objective == want,
                  std::string(ProblemName(kind)) + " n=" + std::to_string(n) +
                      " objective matches brute force");
    }
  }
  return WithinTime(checks, start, 300.0);
}

// ---- 3: rewards ----

std::vector<int> Range(int lo, int hi) {
  std::vector<int> out;
  for (int v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

Verdict Rewards() {
  Checks checks;
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  checks.That(near(IntermediateReward(Range(0, 9), Range(0, 5), 10), 0.4),
              "upper-bound pruning of 4 of 10 values gives +0.4");
  checks.That(near(IntermediateReward(Range(3, 7), Range(5, 7), 10), -0.2),
              "lower-bound pruning of 2 of 10 values gives -0.2");
  checks.That(IntermediateReward(Range(0, 9), Range(0, 9), 10) == 0.0, "no pruning gives 0");
  checks.That(IntermediateReward(Range(0, 9), std::vector<int>{0, 3, 9}, 10) == 0.0, "inner holes are neutral");
  checks.That(TerminalReward(TerminalKind::kInfeasible) == -1.0, "infeasible terminal is -1");
  checks.That(TerminalReward(TerminalKind::kFeasible) == 0.0, "feasible terminal is 0");

  // x, y, z in {1, 2} pairwise different: every dive fails.
  Model conflict;
  {
    const int x = conflict.AddVariable(1, 2);
    const int y = conflict.AddVariable(1, 2);
    const int z = conflict.AddVariable(1, 2);
    const int obj = conflict.AddVariable(0, 3);
    conflict.AddConstraint({ConstraintKind::kNotEqual, {x, y}, {}});
    conflict.AddConstraint({ConstraintKind::kNotEqual, {y, z}, {}});
    conflict.AddConstraint({ConstraintKind::kNotEqual, {x, z}, {}});
    for (int v : {x, y, z}) conflict.AddConstraint({ConstraintKind::kLessOrEqual, {v, obj}, {}});
    conflict.SetObjective(obj);
  }
  Environment env;
  env.Reset(conflict);
  const StepOutcome wipe = env.Step(1);
  checks.That(wipe.terminal == TerminalKind::kInfeasible && wipe.reward == -1.0,
              "wipeout step returns -1");

  // Telescoping identity on random feasible dives.
  std::mt19937_64 rng(303);
  int feasible = 0;
  while (feasible < 500) {
    const auto kind = static_cast<ProblemKind>(feasible % 3);
    const int n = 5 + static_cast<int>(rng() % 16);
    const int m = 1 + static_cast<int>(rng() % std::min(4, n - 1));
    const Model model = BuildModel(GenerateBarabasiAlbert(n, m, rng()), kind).model;
    Model root = model;
    root.FixPoint();
    const auto d1 = root.domain(root.objective()).SortedValues();
    const bool interval = d1.back() - d1.front() + 1 == static_cast<int>(d1.size());
    checks.That(interval, "initial objective domain is an interval");
    Environment dive;
    dive.Reset(model);
    double sum = 0.0;
    while (!dive.terminal()) {
      const auto values = dive.state().model.domain(dive.state().branch_variable).SortedValues();
      sum += dive.Step(values[rng() % values.size()]).reward;
    }
    if (dive.state().terminal != TerminalKind::kFeasible) continue;
    ++feasible;
    const int z = *dive.objective_value();
    int above = 0;
    int below = 0;
    for (int v : d1) {
      above += v > z;
      below += v < z;
    }
    checks.That(near(sum, static_cast<double>(above - below) / d1.size()),
                "telescoping identity");
  }
  return {checks.ok(), checks.Summary()};
}

// ---- 4: gradient check ----

Verdict GradientCheckCriterion() {
  const auto start = Clock::now();
  Checks checks;
  std::mt19937_64 rng(404);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    GnnConfig config;
    config.embedding_dim = 6;
    config.decoder_dim = 6;
    config.hidden = 6;
    config.layers = 3;
    config.pooling = trial % 2 ? Pooling::kSum : Pooling::kMean;
    QNetwork net(config, 500 + trial);
    const TripartiteGraph g = testing::RandomObservation(rng);
    const double err = testing::GradientCheck(net, g, rng);
    worst = std::max(worst, err);
    checks.That(err < 1e-4, "relative error " + Fmt(err) + " < 1e-4");
  }
  Verdict v = WithinTime(checks, start, 120.0);
  v.detail += ", worst relative error " + Fmt(worst, 3);
  return v;
}

// ---- 5: double DQN targets ----

Verdict DqnTargets() {
  Checks checks;
  const std::vector<double> online = {1.0, 2.0};
  const std::vector<double> target = {5.0, 3.0};
  // Online argmax is action 1; the target network scores it 3.
  checks.That(DoubleDqnTarget(0.4, false, online, target) == 3.4, "y = 0.4 + 3 = 3.4");
  checks.That(DoubleDqnTarget(-1.0, true, online, target) == -1.0, "terminal y = r");
  checks.That(DoubleDqnTarget(0.5, false, target, target) == 5.5,
              "identical networks give the max target");
  checks.That(DoubleDqnTarget(0.0, false, std::vector<double>{2.0, 2.0}, target) == 5.0,
              "online ties go to the lowest index");
  checks.That(DoubleDqnTarget(1.0, false, std::vector<double>{-3.0, -1.0, -2.0},
                              std::vector<double>{0.25, -0.5, 7.0}) == 0.5,
              "double DQN ignores the target's own maximum");
  return {checks.ok(), checks.Summary()};
}

// ---- 6: ILDS leaf counts ----

Verdict IldsCombinatorics() {
  Checks checks;
  for (int depth = 1; depth <= 6; ++depth) {
    for (int k = 0; k <= depth; ++k) {
      testing::BinaryTreeSpace tree(depth);
      ExplorationStats stats;
      ExploreWithDiscrepancies(tree, k, stats);
      std::int64_t expected = 0;
      for (int i = 0; i <= k; ++i) expected += testing::Binomial(depth, i);
      checks.That(static_cast<std::int64_t>(tree.leaves.size()) == expected,
                  "depth " + std::to_string(depth) + " k " + std::to_string(k) + " visits " +
                      std::to_string(expected) + " leaves");
      std::set<unsigned> distinct(tree.leaves.begin(), tree.leaves.end());
      bool within = distinct.size() == tree.leaves.size();
      for (unsigned id : tree.leaves) within = within && std::popcount(id) <= k;
      checks.That(within, "leaves are distinct and have at most k discrepancies");
    }
  }
  return {checks.ok(), checks.Summary()};
}

// ---- shared training setup for 7 and 8 ----

GnnConfig DeskNetwork() {
  GnnConfig c;
  c.embedding_dim = 16;
  c.decoder_dim = 16;
  c.hidden = 16;
  c.layers = 3;
  return c;
}

struct Artifacts {
  std::optional<fs::path> dir;

  void Curve(const std::string& name, const std::vector<CurveRow>& rows) const {
    if (!dir) return;
    fs::create_directories(*dir);
    std::ofstream out(*dir / name);
    WriteCurve(out, rows);
  }
  void Report(const std::string& name, const BenchReport& report) const {
    if (!dir) return;
    fs::create_directories(*dir);
    std::ofstream out(*dir / name);
    WriteSummary(out, report);
  }
};

std::vector<ProblemModel> Instances(int n, int m, ProblemKind kind, std::uint64_t first,
                                    int count) {
  std::vector<ProblemModel> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(BuildModel(GenerateBarabasiAlbert(n, m, first + i), kind));
  }
  return out;
}

TrainResult TrainDesk(ProblemKind kind, const TrainConfig& config,
                      const std::vector<ProblemModel>& validation) {
  std::vector<Model> models;
  for (const ProblemModel& p : validation) models.push_back(p.model);
  TrainHooks hooks;
  const ProblemModel& scale = validation.front();
  hooks.report = [&scale](int z) { return scale.Report(z); };
  return Train(
      config,
      [kind](std::mt19937_64& rng) {
        return BuildModel(GenerateBarabasiAlbert(20, 4, rng()), kind).model;
      },
      models, hooks);
}

// ---- 7: desk-scale learning on COL ----

Verdict DeskLearning(const Artifacts& artifacts) {
  const auto start = Clock::now();
  TrainConfig config;
  config.episodes = 1500;
  config.seed = 1;
  config.warmup = 500;
  config.epsilon = {1.0, 0.05, 3000};
  config.eval_period = 20;
  config.patience = 8;
  config.network = DeskNetwork();
  const auto validation = Instances(20, 4, ProblemKind::kColoring, 9000, 20);
  const TrainResult trained = TrainDesk(ProblemKind::kColoring, config, validation);
  artifacts.Curve("col20_curve.csv", trained.curve);
  const double train_seconds = Seconds(start);

  std::vector<NamedInstance> test;
  for (int i = 0; i < 20; ++i) {
    test.push_back({"test" + std::to_string(i), GenerateBarabasiAlbert(20, 4, 5000 + i)});
  }
  BenchConfig bench;
  bench.kind = ProblemKind::kColoring;
  bench.methods = {Method::kDiveLearned, Method::kIldsLearned, Method::kDiveRandom};
  bench.budgets = {100};
  bench.seed = 0;
  const BenchReport report = RunBench(test, bench, &trained.best);
  artifacts.Report("col20_summary.csv", report);

  auto mean_gap = [&report](Method method) {
    double sum = 0.0;
    int count = 0;
    for (const BenchRow& r : report.rows) {
      if (r.method != method) continue;
      // A missing solution counts as an unbounded gap.
      sum += r.gap ? *r.gap : std::numeric_limits<double>::infinity();
      ++count;
    }
    return sum / count;
  };
  const double dive = mean_gap(Method::kDiveLearned);
  const double random = mean_gap(Method::kDiveRandom);
  const double ilds = mean_gap(Method::kIldsLearned);
  const double hours = Seconds(start) / 3600.0;
  const bool pass = dive < random && ilds <= 0.05 && hours <= 4.0;
  return {pass, "episodes " + std::to_string(trained.episodes) + ", training " +
                    Fmt(train_seconds, 4) + " s; mean gap Dive-Learned " + Fmt(dive) +
                    " vs Dive-Random " + Fmt(random) + " (need strictly lower), ILDS-Learned@100 " +
                    Fmt(ilds) + " (need <= 0.05)"};
}

// ---- 8: reward ablation on MIS ----

Verdict RewardAblation(const Artifacts& artifacts, int episodes) {
  const auto validation = Instances(20, 4, ProblemKind::kIndependentSet, 19000, 20);
  std::vector<std::vector<double>> mean(2);
  std::size_t rows = std::numeric_limits<std::size_t>::max();
  std::size_t first_trained = 0;
  std::vector<std::vector<CurveRow>> curves;
  for (int scheme = 0; scheme < 2; ++scheme) {
    for (std::uint64_t seed : {1, 2, 3}) {
      TrainConfig config;
      config.episodes = episodes;
      config.seed = seed;
      config.warmup = 500;
      config.epsilon = {1.0, 0.05, 3000};
      config.eval_period = 10;
      config.reward = scheme == 0 ? RewardScheme::kPropagationBased : RewardScheme::kScoreOnly;
      config.network = DeskNetwork();
      const TrainResult r = TrainDesk(ProblemKind::kIndependentSet, config, validation);
      artifacts.Curve(std::string("mis20_") + (scheme == 0 ? "propagation" : "score") +
                          "_seed" + std::to_string(seed) + ".csv",
                      r.curve);
      curves.push_back(r.curve);
      rows = std::min(rows, r.curve.size());
      // Rows before the replay buffer filled have no loss.
      std::size_t warm = 0;
      while (warm < r.curve.size() && std::isnan(r.curve[warm].loss)) ++warm;
      first_trained = std::max(first_trained, warm);
    }
  }
  for (int scheme = 0; scheme < 2; ++scheme) {
    mean[scheme].assign(rows, 0.0);
    for (int s = 0; s < 3; ++s) {
      for (std::size_t i = 0; i < rows; ++i) {
        mean[scheme][i] += curves[scheme * 3 + s][i].mean_validation_objective / 3.0;
      }
    }
  }
  if (rows == 0 || first_trained >= rows) return {false, "no evaluations after warmup"};
  // Set sizes are maximized: "5% worse" means below 0.95 of the score curve.
  double worst_ratio = std::numeric_limits<double>::infinity();
  int worst_episode = 0;
  bool within = true;
  for (std::size_t i = first_trained; i < rows; ++i) {
    within = within && mean[0][i] >= 0.95 * mean[1][i];
    const double ratio = mean[1][i] > 0.0 ? mean[0][i] / mean[1][i]
                                          : std::numeric_limits<double>::infinity();
    if (ratio < worst_ratio) {
      worst_ratio = ratio;
      worst_episode = curves[0][i].episode;
    }
  }
  // Earliest evaluation from which the propagation curve stays within 5%.
  std::size_t settled = rows;
  while (settled > first_trained && mean[0][settled - 1] >= 0.95 * mean[1][settled - 1]) {
    --settled;
  }
  const std::string settled_text =
      settled < rows ? std::to_string(curves[0][settled].episode) : std::string("never");
  const double final_prop = mean[0][rows - 1];
  const double final_score = mean[1][rows - 1];
  const bool pass = within && final_prop >= final_score;
  return {pass, "training from episode " + std::to_string(curves[0][first_trained].episode) +
                    "; worst propagation/score ratio " + Fmt(worst_ratio) + " at episode " +
                    std::to_string(worst_episode) + " (need >= 0.95), within 5% from episode " +
                    settled_text + " on; final mean set size " + Fmt(final_prop) + " vs " +
                    Fmt(final_score) + " (need >=)"};
}

// ---- 9: bench determinism through the CLI ----

Verdict BenchDeterminism() {
  Checks checks;
  const fs::path dir = testing::ScratchDir("acceptance-bench");
  {
    std::ofstream out(dir / "net.ckpt");
    GnnConfig c;
    c.embedding_dim = 8;
    c.decoder_dim = 8;
    c.hidden = 8;
    QNetwork(c, 21).Save(out);
  }
  for (const char* problem : {"COL", "MIS", "MAXCUT"}) {
    const fs::path inst = dir / (std::string(problem) + "_instances");
    const auto gen = testing::RunCli("gen --problem " + std::string(problem) +
                                         " --n 14 --m 3 --count 6 --seed 9 --out '" +
                                         inst.string() + "'",
                                     dir);
    checks.That(gen.exit_code == 0, std::string(problem) + " gen succeeds");
    std::vector<std::string> runs;
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / (std::string(problem) + "_run" + std::to_string(run));
      const auto r = testing::RunCli(
          "bench --instances-dir '" + inst.string() + "' --problem " + problem +
              " --methods DFS-Random,Dive-Learned,ILDS-Learned,Dive-Random --budgets 20,200"
              " --checkpoint '" +
              (dir / "net.ckpt").string() + "' --seed 5 --out '" + out.string() + "'",
          dir);
      checks.That(r.exit_code == 0, std::string(problem) + " bench succeeds");
      std::string all;
      for (const char* name : {"report.csv", "summary.csv", "profile.csv"}) {
        all += testing::ReadFile(out / name);
      }
      runs.push_back(all);
    }
    checks.That(!runs[0].empty() && runs[0] == runs[1],
                std::string(problem) + " reports are byte identical");
  }
  fs::remove_all(dir);
  return {checks.ok(), checks.Summary()};
}

int Main(int argc, char** argv) {
  std::set<int> selected;
  Artifacts artifacts;
  int ablation_episodes = 400;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.insert(std::atoi(argv[++i]));
    } else if (arg == "--out" && i + 1 < argc) {
      artifacts.dir = argv[++i];
    } else if (arg == "--ablation-episodes" && i + 1 < argc) {
      ablation_episodes = std::atoi(argv[++i]);
    } else {
      std::cerr << "acceptance: unknown argument '" << arg << "'\n";
      return 2;
    }
  }
  const std::vector<std::pair<int, std::function<Verdict()>>> criteria = {
      {1, SolverCore},
      {2, OracleEquivalence},
      {3, Rewards},
      {4, GradientCheckCriterion},
      {5, DqnTargets},
      {6, IldsCombinatorics},
      {7, [&] { return DeskLearning(artifacts); }},
      {8, [&] { return RewardAblation(artifacts, ablation_episodes); }},
      {9, BenchDeterminism},
  };
  bool all = true;
  for (const auto& [id, run] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = Clock::now();
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    all = all && v.pass;
    std::cout << "criterion " << id << ": " << (v.pass ? "PASS" : "FAIL") << " [" << v.detail
              << "] " << Fmt(Seconds(start), 4) << " s" << std::endl;
  }
  return all ? 0 : 1;
}

}  // namespace
}  // namespace cpdqn

int main(int argc, char** argv) { return cpdqn::Main(argc, argv); }
