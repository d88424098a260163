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

#ifndef CPDQN_SEARCH_SEARCH_H_
#define CPDQN_SEARCH_SEARCH_H_

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "cpdqn/core/model.h"

namespace cpdqn {

// Unassigned non-objective variable of minimum domain size, lowest id first.
int FirstFail(const Model& model);

// Orders the values of `var` for branching, most promising first.
class ValueHeuristic {
 public:
  virtual ~ValueHeuristic() = default;
  virtual std::vector<int> Rank(const Model& model, int var) = 0;
};

class RandomValueHeuristic : public ValueHeuristic {
 public:
  explicit RandomValueHeuristic(std::uint64_t seed) : rng_(seed) {}
  std::vector<int> Rank(const Model& model, int var) override;

 private:
  std::mt19937_64 rng_;
};

// Smallest value first.
class MinValueHeuristic : public ValueHeuristic {
 public:
  std::vector<int> Rank(const Model& model, int var) override;
};

enum class SearchStrategy {
  kDfs,
  kIlds,
  // A single ILDS iteration with zero discrepancies.
  kDive,
};

struct SearchConfig {
  SearchStrategy strategy = SearchStrategy::kDfs;
  // Unset means unlimited.
  std::optional<std::int64_t> node_budget;
};

struct SearchResult {
  // Internal (minimized) objective of the best solution.
  std::optional<int> best_objective;
  std::vector<int> best_assignment;
  std::int64_t nodes_visited = 0;
  std::int64_t nodes_at_best = 0;
  double time_to_best = 0.0;
  bool proved_optimal = false;
  // ILDS iterations started.
  int iterations = 0;
};

// Branch-and-bound: every solution posts objective < incumbent. The model is
// left in its root state on return.
SearchResult Solve(Model& model, ValueHeuristic& heuristic,
                   const SearchConfig& config);

SearchResult DfsBranchAndBound(Model& model, ValueHeuristic& heuristic,
                               std::optional<std::int64_t> node_budget);
SearchResult Ilds(Model& model, ValueHeuristic& heuristic,
                  std::optional<std::int64_t> node_budget);

// |best - opt| / |opt|; nullopt when there is no solution. With opt == 0 the
// gap is 0 for best == 0 and +infinity otherwise.
std::optional<double> OptimalityGap(std::optional<double> best, double opt);

}  // namespace cpdqn

#endif  // CPDQN_SEARCH_SEARCH_H_
