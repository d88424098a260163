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

#include "cpdqn/search/search.h"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <limits>

#include "cpdqn/core/contract.h"
#include "cpdqn/search/discrepancy_search.h"

namespace cpdqn {

int FirstFail(const Model& model) {
  int best = -1;
  int best_size = INT_MAX;
  for (int v = 0; v < model.num_variables(); ++v) {
    if (model.is_objective(v)) continue;
    const int size = model.domain(v).size();
    if (size > 1 && size < best_size) {
      best = v;
      best_size = size;
    }
  }
  Expect(best >= 0, "FirstFail: every decision variable is assigned");
  return best;
}

std::vector<int> RandomValueHeuristic::Rank(const Model& model, int var) {
  std::vector<int> values = model.domain(var).SortedValues();
  std::shuffle(values.begin(), values.end(), rng_);
  return values;
}

std::vector<int> MinValueHeuristic::Rank(const Model& model, int var) {
  return model.domain(var).SortedValues();
}

namespace {

using Clock = std::chrono::steady_clock;

class ModelSpace {
 public:
  struct Choice {
    int var;
    int value;
  };

  ModelSpace(Model& model, ValueHeuristic& heuristic, SearchResult& result)
      : model_(model),
        heuristic_(heuristic),
        result_(result),
        start_(Clock::now()) {}

  bool Refresh() {
    if (model_.failed()) return false;
    if (!result_.best_objective.has_value()) return true;
    if (model_.RemoveAbove(model_.objective(), *result_.best_objective - 1)) {
      return model_.FixPoint() == PropagationStatus::kConsistent;
    }
    return true;
  }

  bool IsLeaf() const { return model_.AllDecisionsFixed(); }

  void OnLeaf(const ExplorationStats& stats) {
    const int z = model_.domain(model_.objective()).min();
    if (result_.best_objective.has_value() && z >= *result_.best_objective) {
      return;
    }
    result_.best_objective = z;
    result_.best_assignment.resize(model_.num_variables());
    for (int v = 0; v < model_.num_variables(); ++v) {
      result_.best_assignment[v] = model_.domain(v).min();
    }
    result_.nodes_at_best = stats.nodes;
    result_.time_to_best =
        std::chrono::duration<double>(Clock::now() - start_).count();
  }

  std::vector<Choice> Choices() {
    const int var = FirstFail(model_);
    std::vector<Choice> out;
    for (int value : heuristic_.Rank(model_, var)) out.push_back({var, value});
    return out;
  }

  bool Available(const Choice& c) const {
    return model_.domain(c.var).contains(c.value);
  }

  bool Apply(const Choice& c) {
    open_.push_back(model_.PushCheckpoint());
    model_.Assign(c.var, c.value);
    return model_.FixPoint() == PropagationStatus::kConsistent;
  }

  void Retract() {
    model_.Restore(open_.back());
    open_.pop_back();
  }

 private:
  Model& model_;
  ValueHeuristic& heuristic_;
  SearchResult& result_;
  Clock::time_point start_;
  std::vector<Checkpoint> open_;
};

static_assert(SearchSpace<ModelSpace>);

int OpenDecisions(const Model& model) {
  int open = 0;
  for (int v = 0; v < model.num_variables(); ++v) {
    if (!model.is_objective(v) && !model.domain(v).fixed()) ++open;
  }
  return open;
}

}  // namespace

SearchResult Solve(Model& model, ValueHeuristic& heuristic,
                   const SearchConfig& config) {
  Expect(model.has_objective(), "Solve: model has no objective");
  Expect(!config.node_budget.has_value() || *config.node_budget >= 1,
         "Solve: node budget must be positive");
  SearchResult result;
  const Checkpoint root = model.PushCheckpoint();
  if (model.FixPoint() == PropagationStatus::kFailed) {
    model.Restore(root);
    result.proved_optimal = true;
    return result;
  }
  ModelSpace space(model, heuristic, result);
  ExplorationStats stats;
  if (config.node_budget.has_value()) stats.budget = *config.node_budget;

  switch (config.strategy) {
    case SearchStrategy::kDfs:
      result.iterations = 1;
      ExploreWithDiscrepancies(space, INT_MAX, stats);
      result.proved_optimal = !stats.budget_exhausted;
      break;
    case SearchStrategy::kDive:
      result.iterations = 1;
      ExploreWithDiscrepancies(space, 0, stats);
      result.proved_optimal =
          !stats.budget_exhausted && !stats.discrepancy_cutoff;
      break;
    case SearchStrategy::kIlds: {
      const int max_depth = OpenDecisions(model);
      for (int k = 0; k <= max_depth; ++k) {
        stats.discrepancy_cutoff = false;
        ++result.iterations;
        ExploreWithDiscrepancies(space, k, stats);
        if (stats.budget_exhausted) break;
        if (!stats.discrepancy_cutoff) {
          result.proved_optimal = true;
          break;
        }
      }
      break;
    }
  }
  result.nodes_visited = stats.nodes;
  model.Restore(root);
  return result;
}

SearchResult DfsBranchAndBound(Model& model, ValueHeuristic& heuristic,
                               std::optional<std::int64_t> node_budget) {
  return Solve(model, heuristic, {SearchStrategy::kDfs, node_budget});
}

SearchResult Ilds(Model& model, ValueHeuristic& heuristic,
                  std::optional<std::int64_t> node_budget) {
  return Solve(model, heuristic, {SearchStrategy::kIlds, node_budget});
}

std::optional<double> OptimalityGap(std::optional<double> best, double opt) {
  if (!best.has_value()) return std::nullopt;
  if (opt == 0.0) {
    return *best == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::abs(*best - opt) / std::abs(opt);
}

}  // namespace cpdqn
