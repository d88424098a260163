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

#include "cpdqn/problems/problems.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cpdqn/core/contract.h"

namespace cpdqn {

std::string_view ProblemName(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kColoring:
      return "COL";
    case ProblemKind::kIndependentSet:
      return "MIS";
    case ProblemKind::kMaxCut:
      return "MAXCUT";
  }
  return "?";
}

std::optional<ProblemKind> ParseProblem(std::string_view name) {
  std::string upper(name);
  for (char& ch : upper) ch = static_cast<char>(std::toupper(ch));
  if (upper == "COL") return ProblemKind::kColoring;
  if (upper == "MIS") return ProblemKind::kIndependentSet;
  if (upper == "MAXCUT") return ProblemKind::kMaxCut;
  return std::nullopt;
}

bool IsMaximization(ProblemKind kind) {
  return kind != ProblemKind::kColoring;
}

GraphInstance GenerateBarabasiAlbert(int n, int m, std::uint64_t seed) {
  Expect(m >= 1 && m < n, "GenerateBarabasiAlbert: need 1 <= m < n");
  GraphInstance g;
  g.node_count = n;
  g.attachment = m;
  g.seed = seed;
  std::mt19937_64 rng(seed);

  // A node of degree d appears d times, so uniform draws from this list are
  // degree-proportional.
  std::vector<int> endpoints;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      g.edges.emplace_back(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }
  std::vector<int> targets;
  for (int v = m; v < n; ++v) {
    targets.clear();
    while (static_cast<int>(targets.size()) < m) {
      int t;
      if (endpoints.empty()) {
        // Only reachable for m == 1 with an edgeless seed.
        t = std::uniform_int_distribution<int>(0, v - 1)(rng);
      } else {
        t = endpoints[std::uniform_int_distribution<std::size_t>(
            0, endpoints.size() - 1)(rng)];
      }
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
        targets.push_back(t);
      }
    }
    std::sort(targets.begin(), targets.end());
    for (int t : targets) {
      g.edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return g;
}

double ProblemModel::Report(int internal_objective) const {
  switch (kind) {
    case ProblemKind::kColoring:
      return internal_objective + 1.0;
    case ProblemKind::kIndependentSet:
    case ProblemKind::kMaxCut:
      return -static_cast<double>(internal_objective);
  }
  return 0.0;
}

int ProblemModel::Internal(double reported) const {
  const int r = static_cast<int>(std::llround(reported));
  return kind == ProblemKind::kColoring ? r - 1 : -r;
}

ProblemModel BuildModel(const GraphInstance& instance, ProblemKind kind) {
  const int n = instance.node_count;
  Expect(n >= 1, "BuildModel: empty graph");
  for (auto [a, b] : instance.edges) {
    Expect(a >= 0 && b >= 0 && a < n && b < n && a != b,
           "BuildModel: invalid edge");
  }
  ProblemModel pm{kind, Model(), n};
  Model& model = pm.model;
  const int edges = static_cast<int>(instance.edges.size());
  std::vector<int> witness;

  switch (kind) {
    case ProblemKind::kColoring: {
      for (int i = 0; i < n; ++i) model.AddVariable(0, n - 1);
      const int obj = model.AddVariable(0, n - 1);
      for (auto [a, b] : instance.edges) {
        model.AddConstraint({ConstraintKind::kNotEqual, {a, b}, {}});
      }
      for (int i = 0; i < n; ++i) {
        model.AddConstraint({ConstraintKind::kLessOrEqual, {i, obj}, {}});
      }
      model.SetObjective(obj);
      for (int i = 0; i < n; ++i) witness.push_back(i);
      witness.push_back(n - 1);
      break;
    }
    case ProblemKind::kIndependentSet: {
      for (int i = 0; i < n; ++i) model.AddVariable(0, 1);
      std::vector<int> slack;
      for (int e = 0; e < edges; ++e) slack.push_back(model.AddVariable(0, 1));
      const int obj = model.AddVariable(-n, 0);
      for (int e = 0; e < edges; ++e) {
        const auto [a, b] = instance.edges[e];
        model.AddConstraint({ConstraintKind::kSumEquals, {a, b, slack[e]}, {1, 1}});
      }
      Constraint total{ConstraintKind::kSumEquals, {}, {}};
      for (int i = 0; i < n; ++i) {
        total.scope.push_back(i);
        total.coefficients.push_back(-1);
      }
      total.scope.push_back(obj);
      model.AddConstraint(std::move(total));
      model.SetObjective(obj);
      witness.assign(model.num_variables(), 0);
      break;
    }
    case ProblemKind::kMaxCut: {
      for (int i = 0; i < n; ++i) model.AddVariable(0, 1);
      std::vector<int> cut;
      for (int e = 0; e < edges; ++e) cut.push_back(model.AddVariable(0, 1));
      const int obj = model.AddVariable(-edges, 0);
      for (int e = 0; e < edges; ++e) {
        const auto [a, b] = instance.edges[e];
        model.AddConstraint(
            {ConstraintKind::kReifiedNotEqual, {cut[e], a, b}, {}});
      }
      Constraint total{ConstraintKind::kSumEquals, {}, {}};
      for (int e = 0; e < edges; ++e) {
        total.scope.push_back(cut[e]);
        total.coefficients.push_back(-1);
      }
      total.scope.push_back(obj);
      model.AddConstraint(std::move(total));
      model.SetObjective(obj);
      witness.assign(model.num_variables(), 0);
      break;
    }
  }

  for (int c = 0; c < model.num_constraints(); ++c) {
    if (!IsSatisfied(model.constraint(c), witness)) {
      throw std::runtime_error("BuildModel: witness solution rejected");
    }
  }
  return pm;
}

std::optional<SizePreset> LookupSizePreset(ProblemKind kind,
                                           std::string_view preset) {
  const int index = preset == "small"    ? 0
                    : preset == "medium" ? 1
                    : preset == "large"  ? 2
                                         : -1;
  if (index < 0) return std::nullopt;
  static constexpr SizePreset kColoring[] = {{20, 4}, {40, 8}, {80, 15}};
  static constexpr SizePreset kIndependentSet[] = {{30, 4}, {50, 6}, {100, 10}};
  static constexpr SizePreset kMaxCut[] = {{20, 4}, {50, 4}};
  switch (kind) {
    case ProblemKind::kColoring:
      return kColoring[index];
    case ProblemKind::kIndependentSet:
      return kIndependentSet[index];
    case ProblemKind::kMaxCut:
      if (index == 2) return std::nullopt;
      return kMaxCut[index];
  }
  return std::nullopt;
}

void WriteInstance(std::ostream& out, const GraphInstance& instance) {
  out << "cpdqn-instance 1\n";
  out << "nodes " << instance.node_count << "\n";
  out << "m " << instance.attachment << "\n";
  out << "seed " << instance.seed << "\n";
  out << "edges " << instance.edges.size() << "\n";
  for (auto [a, b] : instance.edges) out << a << " " << b << "\n";
}

namespace {

template <typename T>
T ReadField(std::istream& in, std::string_view key) {
  std::string word;
  T value{};
  if (!(in >> word) || word != key || !(in >> value)) {
    throw std::runtime_error("instance: expected field '" + std::string(key) +
                             "'");
  }
  return value;
}

}  // namespace

GraphInstance ReadInstance(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "cpdqn-instance" || version != 1) {
    throw std::runtime_error("instance: bad header");
  }
  GraphInstance g;
  g.node_count = ReadField<int>(in, "nodes");
  g.attachment = ReadField<int>(in, "m");
  g.seed = ReadField<std::uint64_t>(in, "seed");
  const auto count = ReadField<std::size_t>(in, "edges");
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < count; ++i) {
    int a, b;
    if (!(in >> a >> b)) throw std::runtime_error("instance: truncated edges");
    if (a == b || a < 0 || b < 0 || a >= g.node_count || b >= g.node_count) {
      throw std::runtime_error("instance: invalid edge");
    }
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) {
      throw std::runtime_error("instance: duplicate edge");
    }
    g.edges.emplace_back(a, b);
  }
  return g;
}

GraphInstance LoadInstance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  return ReadInstance(in);
}

}  // namespace cpdqn
