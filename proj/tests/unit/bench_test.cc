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

#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cpdqn/bench/bench.h"
#include "cpdqn/core/contract.h"
#include "cpdqn/nn/q_network.h"
#include "cpdqn/problems/problems.h"
#include "doctest.h"
#include "support/oracles.h"

namespace cpdqn {
namespace {

using testing::BruteForceReported;

std::vector<NamedInstance> Instances(int count, int n, int m, std::uint64_t seed) {
  std::vector<NamedInstance> out;
  for (int i = 0; i < count; ++i) {
    out.push_back({"g" + std::to_string(i), GenerateBarabasiAlbert(n, m, seed + i)});
  }
  return out;
}

QNetwork SmallNet() {
  GnnConfig c;
  c.embedding_dim = 4;
  c.decoder_dim = 4;
  c.hidden = 4;
  c.layers = 2;
  return QNetwork(c, 3);
}

BenchConfig AllMethods(ProblemKind kind) {
  BenchConfig c;
  c.kind = kind;
  c.methods = {Method::kDfsRandom, Method::kDiveLearned, Method::kIldsLearned,
               Method::kDiveRandom};
  c.budgets = {10, 100};
  c.seed = 7;
  return c;
}

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  return cells;
}

TEST_CASE("method names round trip") {
  for (Method m : {Method::kOpt, Method::kDfsRandom, Method::kDiveLearned, Method::kIldsLearned,
                   Method::kDiveRandom}) {
    CHECK(ParseMethod(MethodName(m)) == m);
  }
  CHECK(ParseMethod("ilds-learned") == Method::kIldsLearned);
  CHECK_FALSE(ParseMethod("bogus").has_value());
  CHECK(UsesBudget(Method::kDfsRandom));
  CHECK_FALSE(UsesBudget(Method::kDiveLearned));
  CHECK(UsesNetwork(Method::kIldsLearned));
  CHECK_FALSE(UsesNetwork(Method::kOpt));
}

TEST_CASE("unlimited DFS-Random matches brute force") {
  for (ProblemKind kind :
       {ProblemKind::kColoring, ProblemKind::kIndependentSet, ProblemKind::kMaxCut}) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const GraphInstance g = GenerateBarabasiAlbert(3 + s % 6, 1 + s % 2, 40 + s);
      const MethodOutcome out =
          RunMethod(g, kind, Method::kDfsRandom, nullptr, std::nullopt, s);
      REQUIRE(out.objective.has_value());
      CHECK(*out.objective == BruteForceReported(g, kind));
      CHECK(out.proved_optimal);
    }
  }
}

TEST_CASE("dive methods ignore the budget and stay within the variable count") {
  const QNetwork net = SmallNet();
  const GraphInstance g = GenerateBarabasiAlbert(12, 2, 5);
  for (ProblemKind kind :
       {ProblemKind::kColoring, ProblemKind::kIndependentSet, ProblemKind::kMaxCut}) {
    const int vars = BuildModel(g, kind).model.num_variables();
    for (Method m : {Method::kDiveLearned, Method::kDiveRandom}) {
      const MethodOutcome a = RunMethod(g, kind, m, &net, std::nullopt, 1);
      const MethodOutcome b = RunMethod(g, kind, m, &net, 1, 1);
      CHECK(a.nodes <= vars);
      CHECK(a.nodes == b.nodes);
      CHECK(a.objective == b.objective);
    }
  }
}

TEST_CASE("budgeted methods respect the node budget") {
  const QNetwork net = SmallNet();
  const GraphInstance g = GenerateBarabasiAlbert(15, 3, 8);
  for (Method m : {Method::kDfsRandom, Method::kIldsLearned}) {
    const MethodOutcome out = RunMethod(g, ProblemKind::kColoring, m, &net, 25, 2);
    CHECK(out.nodes <= 25);
  }
}

TEST_CASE("learned methods require a network") {
  const GraphInstance g = GenerateBarabasiAlbert(5, 1, 1);
  CHECK_THROWS_AS(
      RunMethod(g, ProblemKind::kColoring, Method::kDiveLearned, nullptr, std::nullopt, 0),
      ContractViolation);
  const auto instances = Instances(2, 5, 1, 0);
  CHECK_THROWS_AS(RunBench(instances, AllMethods(ProblemKind::kColoring), nullptr),
                  ContractViolation);
}

TEST_CASE("profile ratio orientation") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(ProfileRatio(ProblemKind::kColoring, 5.0, 4.0) == doctest::Approx(1.25));
  CHECK(ProfileRatio(ProblemKind::kIndependentSet, 4.0, 5.0) == doctest::Approx(1.25));
  CHECK(ProfileRatio(ProblemKind::kMaxCut, 10.0, 10.0) == 1.0);
  CHECK(ProfileRatio(ProblemKind::kIndependentSet, 0.0, 3.0) == inf);
  CHECK(ProfileRatio(ProblemKind::kColoring, std::nullopt, 3.0) == inf);
}

TEST_CASE("tau grid") {
  const std::vector<double> taus = TauGrid(2.0, 0.25);
  REQUIRE(taus.size() == 5);
  CHECK(taus.front() == 1.0);
  CHECK(taus.back() == doctest::Approx(2.0));
  CHECK_THROWS_AS(TauGrid(0.5, 0.1), ContractViolation);
}

TEST_CASE("bench rows, gaps and summary means") {
  const QNetwork net = SmallNet();
  for (ProblemKind kind :
       {ProblemKind::kColoring, ProblemKind::kIndependentSet, ProblemKind::kMaxCut}) {
    const auto instances = Instances(20, 10, 2, 100);
    const BenchReport report = RunBench(instances, AllMethods(kind), &net);
    // OPT + DFS-Random x2 + Dive-Learned + ILDS-Learned x2 + Dive-Random.
    REQUIRE(report.rows.size() == 20 * 7);

    std::map<std::string, double> opt;
    for (const BenchRow& r : report.rows) {
      if (r.method == Method::kOpt) {
        REQUIRE(r.objective.has_value());
        CHECK(*r.objective == BruteForceReported(instances[std::stoi(r.instance.substr(1))].graph,
                                                 kind));
        CHECK(r.gap == 0.0);
        opt[r.instance] = *r.objective;
      }
    }
    for (const BenchRow& r : report.rows) {
      REQUIRE(opt.count(r.instance));
      if (!r.objective) continue;
      const double o = opt[r.instance];
      CHECK(*r.gap == doctest::Approx(std::abs(*r.objective - o) / std::abs(o)));
    }

    std::stringstream summary;
    WriteSummary(summary, report);
    std::string line;
    std::getline(summary, line);
    CHECK(line == "method,budget,instances,solved,mean_objective,mean_gap,mean_nodes");
    int series = 0;
    while (std::getline(summary, line)) {
      ++series;
      const auto cells = Split(line);
      REQUIRE(cells.size() == 7);
      double obj = 0.0;
      double gap = 0.0;
      double nodes = 0.0;
      int count = 0;
      int solved = 0;
      for (const BenchRow& r : report.rows) {
        const std::string budget = r.budget ? std::to_string(*r.budget) : "unlimited";
        if (MethodName(r.method) != cells[0] || budget != cells[1]) continue;
        ++count;
        nodes += static_cast<double>(r.nodes);
        if (r.objective) {
          ++solved;
          obj += *r.objective;
          gap += *r.gap;
        }
      }
      CHECK(std::stoi(cells[2]) == count);
      CHECK(std::stoi(cells[3]) == solved);
      CHECK(std::stod(cells[4]) == doctest::Approx(obj / solved).epsilon(1e-12));
      CHECK(std::stod(cells[5]) == doctest::Approx(gap / solved).epsilon(1e-12));
      CHECK(std::stod(cells[6]) == doctest::Approx(nodes / count).epsilon(1e-12));
    }
    CHECK(series == 7);
  }
}

TEST_CASE("performance profile properties") {
  const QNetwork net = SmallNet();
  const auto instances = Instances(20, 12, 3, 300);
  const BenchReport report = RunBench(instances, AllMethods(ProblemKind::kColoring), &net);
  const std::vector<double> taus = TauGrid(3.0, 0.05);
  const ProfileTable table = PerformanceProfile(report, taus);
  REQUIRE(table.labels.size() == 7);
  CHECK(table.labels[0] == "OPT");
  CHECK(table.labels[1] == "DFS-Random@10");
  for (std::size_t j = 0; j < table.labels.size(); ++j) {
    for (std::size_t t = 0; t < taus.size(); ++t) {
      const double v = table.values[t][j];
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      if (t > 0) CHECK(v >= table.values[t - 1][j]);
    }
  }
  // OPT is a step to 1.0 at tau = 1.
  for (std::size_t t = 0; t < taus.size(); ++t) CHECK(table.values[t][0] == 1.0);

  // Value at tau: recomputed from the rows.
  std::map<std::string, double> opt;
  for (const BenchRow& r : report.rows) {
    if (r.method == Method::kOpt) opt[r.instance] = *r.objective;
  }
  for (std::size_t t = 0; t < taus.size(); t += 7) {
    int hits = 0;
    int total = 0;
    for (const BenchRow& r : report.rows) {
      if (r.method != Method::kDiveRandom) continue;
      ++total;
      if (r.objective && *r.objective / opt[r.instance] <= taus[t]) ++hits;
    }
    CHECK(table.values[t][6] == doctest::Approx(static_cast<double>(hits) / total));
  }
}

TEST_CASE("profile hits 1.0 once every instance is solved optimally") {
  BenchReport report;
  report.kind = ProblemKind::kIndependentSet;
  for (int i = 0; i < 4; ++i) {
    const std::string name = "i" + std::to_string(i);
    report.rows.push_back({name, Method::kOpt, std::nullopt, 6.0, 0.0, 10, 0.0});
    report.rows.push_back({name, Method::kDiveLearned, std::nullopt, i < 2 ? 6.0 : 4.0,
                           std::nullopt, 3, 0.0});
  }
  const std::vector<double> taus = {1.0, 1.25, 1.5, 2.0};
  const ProfileTable table = PerformanceProfile(report, taus);
  CHECK(table.values[0][1] == 0.5);
  CHECK(table.values[1][1] == 0.5);
  CHECK(table.values[2][1] == 1.0);
  CHECK(table.values[3][1] == 1.0);
}

TEST_CASE("bench outputs are deterministic and worker independent") {
  const QNetwork net = SmallNet();
  const auto instances = Instances(8, 12, 2, 500);
  BenchConfig config = AllMethods(ProblemKind::kMaxCut);
  auto render = [&](int workers) {
    config.workers = workers;
    const BenchReport report = RunBench(instances, config, &net);
    std::stringstream out;
    WriteReport(out, report);
    WriteSummary(out, report);
    const std::vector<double> taus = TauGrid(2.0, 0.1);
    WriteProfile(out, PerformanceProfile(report, taus));
    return out.str();
  };
  const std::string first = render(1);
  CHECK(first == render(1));
  CHECK(first == render(3));
}

}  // namespace
}  // namespace cpdqn
