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

#ifndef CPDQN_PROBLEMS_PROBLEMS_H_
#define CPDQN_PROBLEMS_PROBLEMS_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cpdqn/core/model.h"

namespace cpdqn {

// Simple undirected graph; edges are stored with first < second.
struct GraphInstance {
  int node_count = 0;
  int attachment = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<int, int>> edges;

  bool operator==(const GraphInstance&) const = default;
};

enum class ProblemKind { kColoring, kIndependentSet, kMaxCut };

std::string_view ProblemName(ProblemKind kind);
// Accepts "COL", "MIS" and "MAXCUT" (case-insensitive).
std::optional<ProblemKind> ParseProblem(std::string_view name);
bool IsMaximization(ProblemKind kind);

// Preferential attachment: an m-node clique, then every new node links to m
// distinct existing nodes drawn proportionally to degree. Requires 1 <= m < n.
GraphInstance GenerateBarabasiAlbert(int n, int m, std::uint64_t seed);

// A CP model with the bookkeeping needed to report objectives on the
// problem's own scale: colors used, independent set size or cut size.
struct ProblemModel {
  ProblemKind kind;
  Model model;
  // The graph's node variables x_0 .. x_{n-1} are model variables 0 .. n-1.
  int node_count = 0;

  double Report(int internal_objective) const;
  int Internal(double reported) const;
};

// COL: x_i in [0, n-1], x_i != x_j per edge, x_i <= obj, minimize obj
//      (colors used = obj + 1).
// MIS: x_i in {0,1}, x_i + x_j == s_ij with s_ij in {0,1} per edge,
//      obj = -sum x_i (maximize the set size).
// MAXCUT: x_i in {0,1}, b_ij <=> x_i != x_j per edge, obj = -sum b_ij.
// Throws std::runtime_error if the trivial witness solution is rejected.
ProblemModel BuildModel(const GraphInstance& instance, ProblemKind kind);

struct SizePreset {
  int nodes;
  int attachment;
};
// "small", "medium" or "large".
std::optional<SizePreset> LookupSizePreset(ProblemKind kind,
                                           std::string_view preset);

void WriteInstance(std::ostream& out, const GraphInstance& instance);
// Throws std::runtime_error on malformed input.
GraphInstance ReadInstance(std::istream& in);
GraphInstance LoadInstance(const std::string& path);

}  // namespace cpdqn

#endif  // CPDQN_PROBLEMS_PROBLEMS_H_
