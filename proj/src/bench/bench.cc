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

#include "cpdqn/bench/bench.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <thread>
#include <utility>

#include "cpdqn/core/contract.h"
#include "cpdqn/dqn/learned_heuristic.h"
#include "cpdqn/search/search.h"

namespace cpdqn {

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kOpt:
      return "OPT";
    case Method::kDfsRandom:
      return "DFS-Random";
    case Method::kDiveLearned:
      return "Dive-Learned";
    case Method::kIldsLearned:
      return "ILDS-Learned";
    case Method::kDiveRandom:
      return "Dive-Random";
  }
  return "?";
}

std::optional<Method> ParseMethod(std::string_view name) {
  std::string lower(name);
  for (char& ch : lower) ch = static_cast<char>(std::tolower(ch));
  for (Method m : {Method::kOpt, Method::kDfsRandom, Method::kDiveLearned,
                   Method::kIldsLearned, Method::kDiveRandom}) {
    std::string candidate(MethodName(m));
    for (char& ch : candidate) ch = static_cast<char>(std::tolower(ch));
    if (candidate == lower) return m;
  }
  return std::nullopt;
}

bool UsesNetwork(Method method) {
  return method == Method::kDiveLearned || method == Method::kIldsLearned;
}

bool UsesBudget(Method method) {
  return method == Method::kDfsRandom || method == Method::kIldsLearned;
}

MethodOutcome RunMethod(const GraphInstance& instance, ProblemKind kind, Method method,
                        const QNetwork* net, std::optional<std::int64_t> budget,
                        std::uint64_t seed) {
  Expect(!UsesNetwork(method) || net != nullptr, "RunMethod: learned method needs a network");
  Expect(!budget || *budget > 0, "RunMethod: budget must be positive");
  ProblemModel pm = BuildModel(instance, kind);
  RandomValueHeuristic random(seed);
  SearchResult r;
  switch (method) {
    case Method::kOpt:
      r = DfsBranchAndBound(pm.model, random, std::nullopt);
      break;
    case Method::kDfsRandom:
      r = DfsBranchAndBound(pm.model, random, budget);
      break;
    case Method::kDiveRandom:
      r = Solve(pm.model, random, {SearchStrategy::kDive, std::nullopt});
      break;
    case Method::kDiveLearned: {
      LearnedValueHeuristic learned(*net);
      r = Solve(pm.model, learned, {SearchStrategy::kDive, std::nullopt});
      break;
    }
    case Method::kIldsLearned: {
      LearnedValueHeuristic learned(*net);
      r = Ilds(pm.model, learned, budget);
      break;
    }
  }
  MethodOutcome out;
  if (r.best_objective) out.objective = pm.Report(*r.best_objective);
  out.nodes = r.nodes_visited;
  out.time_to_best = r.time_to_best;
  out.proved_optimal = r.proved_optimal;
  return out;
}

namespace {

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Task {
  Method method;
  std::optional<std::int64_t> budget;
};

std::vector<Task> Tasks(const BenchConfig& config) {
  std::vector<Task> tasks = {{Method::kOpt, std::nullopt}};
  for (Method m : config.methods) {
    if (m == Method::kOpt) continue;
    if (UsesBudget(m) && !config.budgets.empty()) {
      for (std::int64_t b : config.budgets) tasks.push_back({m, b});
    } else {
      tasks.push_back({m, std::nullopt});
    }
  }
  return tasks;
}

std::vector<BenchRow> RunInstance(const NamedInstance& inst, std::size_t index,
                                  const BenchConfig& config, const std::vector<Task>& tasks,
                                  const QNetwork* net) {
  const std::uint64_t seed = SplitMix(config.seed ^ SplitMix(index));
  std::vector<BenchRow> rows;
  std::optional<double> opt;
  for (const Task& task : tasks) {
    const MethodOutcome out =
        RunMethod(inst.graph, config.kind, task.method, net, task.budget, seed);
    BenchRow row;
    row.instance = inst.name;
    row.method = task.method;
    row.budget = task.budget;
    row.objective = out.objective;
    row.nodes = out.nodes;
    row.time_to_best = out.time_to_best;
    if (task.method == Method::kOpt) opt = out.objective;
    if (opt) row.gap = OptimalityGap(out.objective, *opt);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string BudgetText(const std::optional<std::int64_t>& b) {
  return b ? std::to_string(*b) : std::string("unlimited");
}

std::string SeriesLabel(const BenchRow& row) {
  std::string label(MethodName(row.method));
  if (row.budget) label += "@" + std::to_string(*row.budget);
  return label;
}

template <typename T>
void WriteOptional(std::ostream& out, const std::optional<T>& v) {
  if (v) {
    out << *v;
  } else {
    out << "none";
  }
}

}  // namespace

BenchReport RunBench(std::span<const NamedInstance> instances, const BenchConfig& config,
                     const QNetwork* net) {
  for (Method m : config.methods) {
    Expect(!UsesNetwork(m) || net != nullptr, "RunBench: learned methods need a checkpoint");
  }
  for (std::int64_t b : config.budgets) Expect(b > 0, "RunBench: budgets must be positive");
  const std::vector<Task> tasks = Tasks(config);
  std::vector<std::vector<BenchRow>> per_instance(instances.size());
  const int workers =
      std::max(1, std::min<int>(config.workers, static_cast<int>(instances.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      per_instance[i] = RunInstance(instances[i], i, config, tasks, net);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < instances.size(); i = next++) {
          per_instance[i] = RunInstance(instances[i], i, config, tasks, net);
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  BenchReport report;
  report.kind = config.kind;
  for (auto& rows : per_instance) {
    for (BenchRow& r : rows) report.rows.push_back(std::move(r));
  }
  return report;
}

void WriteReport(std::ostream& out, const BenchReport& report) {
  const auto precision = out.precision(17);
  out << "instance,method,budget,objective,gap,nodes\n";
  for (const BenchRow& r : report.rows) {
    out << r.instance << "," << MethodName(r.method) << "," << BudgetText(r.budget) << ",";
    WriteOptional(out, r.objective);
    out << ",";
    WriteOptional(out, r.gap);
    out << "," << r.nodes << "\n";
  }
  out.precision(precision);
}

void WriteSummary(std::ostream& out, const BenchReport& report) {
  struct Acc {
    int count = 0;
    int solved = 0;
    double objective = 0.0;
    double gap = 0.0;
    double nodes = 0.0;
  };
  std::vector<std::string> order;
  std::map<std::string, std::pair<const BenchRow*, Acc>> acc;
  for (const BenchRow& r : report.rows) {
    const std::string key = SeriesLabel(r);
    auto [it, fresh] = acc.try_emplace(key, &r, Acc{});
    if (fresh) order.push_back(key);
    Acc& a = it->second.second;
    ++a.count;
    a.nodes += static_cast<double>(r.nodes);
    if (r.objective && r.gap) {
      ++a.solved;
      a.objective += *r.objective;
      a.gap += *r.gap;
    }
  }
  const auto precision = out.precision(17);
  out << "method,budget,instances,solved,mean_objective,mean_gap,mean_nodes\n";
  for (const std::string& key : order) {
    const auto& [row, a] = acc.at(key);
    out << MethodName(row->method) << "," << BudgetText(row->budget) << "," << a.count
        << "," << a.solved << ",";
    if (a.solved) {
      out << a.objective / a.solved << "," << a.gap / a.solved;
    } else {
      out << "none,none";
    }
    out << "," << a.nodes / a.count << "\n";
  }
  out.precision(precision);
}

void WriteTimings(std::ostream& out, const BenchReport& report) {
  out << "instance,method,budget,time_to_best_seconds\n";
  for (const BenchRow& r : report.rows) {
    out << r.instance << "," << MethodName(r.method) << "," << BudgetText(r.budget) << ","
        << r.time_to_best << "\n";
  }
}

double ProfileRatio(ProblemKind kind, std::optional<double> achieved, double opt) {
  const double inf = std::numeric_limits<double>::infinity();
  if (!achieved) return inf;
  const double a = *achieved;
  if (a == opt) return 1.0;
  const double num = IsMaximization(kind) ? opt : a;
  const double den = IsMaximization(kind) ? a : opt;
  if (den <= 0.0) return inf;
  return std::max(1.0, num / den);
}

ProfileTable PerformanceProfile(const BenchReport& report, std::span<const double> taus) {
  std::map<std::string, double> opt;
  for (const BenchRow& r : report.rows) {
    if (r.method == Method::kOpt && r.objective) opt[r.instance] = *r.objective;
  }
  ProfileTable table;
  table.taus.assign(taus.begin(), taus.end());
  std::map<std::string, std::size_t> column;
  std::vector<std::vector<double>> ratios;
  for (const BenchRow& r : report.rows) {
    const auto it = opt.find(r.instance);
    if (it == opt.end()) continue;
    const std::string label = SeriesLabel(r);
    auto [c, fresh] = column.try_emplace(label, table.labels.size());
    if (fresh) {
      table.labels.push_back(label);
      ratios.emplace_back();
    }
    ratios[c->second].push_back(ProfileRatio(report.kind, r.objective, it->second));
  }
  for (double tau : taus) {
    std::vector<double> row;
    for (const std::vector<double>& rs : ratios) {
      const auto hits = std::count_if(rs.begin(), rs.end(), [tau](double x) { return x <= tau; });
      row.push_back(rs.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(rs.size()));
    }
    table.values.push_back(std::move(row));
  }
  return table;
}

std::vector<double> TauGrid(double tau_max, double step) {
  Expect(tau_max >= 1.0 && step > 0.0, "TauGrid: need tau_max >= 1 and step > 0");
  std::vector<double> taus;
  for (int k = 0;; ++k) {
    const double tau = 1.0 + k * step;
    if (tau > tau_max + 1e-9) break;
    taus.push_back(tau);
  }
  return taus;
}

void WriteProfile(std::ostream& out, const ProfileTable& table) {
  out << "tau";
  for (const std::string& l : table.labels) out << "," << l;
  out << "\n";
  for (std::size_t t = 0; t < table.taus.size(); ++t) {
    out << table.taus[t];
    for (double v : table.values[t]) out << "," << v;
    out << "\n";
  }
}

}  // namespace cpdqn
