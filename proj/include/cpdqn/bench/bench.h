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

// Benchmark protocol: exact reference, baselines and learned methods under
// node budgets, with per-instance reports and performance profiles.

#ifndef CPDQN_BENCH_BENCH_H_
#define CPDQN_BENCH_BENCH_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpdqn/nn/q_network.h"
#include "cpdqn/problems/problems.h"

namespace cpdqn {

enum class Method {
  kOpt,
  kDfsRandom,
  kDiveLearned,
  kIldsLearned,
  // Baseline: a single dive with random value ordering.
  kDiveRandom,
};

std::string_view MethodName(Method method);
std::optional<Method> ParseMethod(std::string_view name);
bool UsesNetwork(Method method);
// Dives ignore node budgets; OPT is always unlimited.
bool UsesBudget(Method method);

struct MethodOutcome {
  // Reported scale (colors, set size, cut size); unset without a solution.
  std::optional<double> objective;
  std::int64_t nodes = 0;
  double time_to_best = 0.0;
  bool proved_optimal = false;
};

// `net` is required for learned methods. `seed` drives random orderings.
MethodOutcome RunMethod(const GraphInstance& instance, ProblemKind kind, Method method,
                        const QNetwork* net, std::optional<std::int64_t> budget,
                        std::uint64_t seed);

struct NamedInstance {
  std::string name;
  GraphInstance graph;
};

struct BenchRow {
  std::string instance;
  Method method = Method::kOpt;
  std::optional<std::int64_t> budget;
  std::optional<double> objective;
  std::optional<double> gap;
  std::int64_t nodes = 0;
  double time_to_best = 0.0;
};

struct BenchConfig {
  ProblemKind kind = ProblemKind::kColoring;
  std::vector<Method> methods;
  std::vector<std::int64_t> budgets;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct BenchReport {
  ProblemKind kind = ProblemKind::kColoring;
  std::vector<BenchRow> rows;
};

// OPT runs first on every instance; other rows are scored against it.
BenchReport RunBench(std::span<const NamedInstance> instances, const BenchConfig& config,
                     const QNetwork* net);

// Per-instance rows without wall-clock columns.
void WriteReport(std::ostream& out, const BenchReport& report);
// Means per method and budget.
void WriteSummary(std::ostream& out, const BenchReport& report);
void WriteTimings(std::ostream& out, const BenchReport& report);

// Objective ratio to OPT, oriented so that 1 is optimal and larger is worse;
// +infinity without a solution.
double ProfileRatio(ProblemKind kind, std::optional<double> achieved, double opt);

struct ProfileTable {
  std::vector<double> taus;
  std::vector<std::string> labels;
  // values[t][j]: fraction of instances of series j with ratio <= taus[t].
  std::vector<std::vector<double>> values;
};

ProfileTable PerformanceProfile(const BenchReport& report, std::span<const double> taus);
std::vector<double> TauGrid(double tau_max, double step);
void WriteProfile(std::ostream& out, const ProfileTable& table);

}  // namespace cpdqn

#endif  // CPDQN_BENCH_BENCH_H_
