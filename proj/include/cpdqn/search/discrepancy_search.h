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

#ifndef CPDQN_SEARCH_DISCREPANCY_SEARCH_H_
#define CPDQN_SEARCH_DISCREPANCY_SEARCH_H_

#include <concepts>
#include <cstdint>
#include <vector>

namespace cpdqn {

struct ExplorationStats {
  // Branching decisions applied so far (the search "nodes").
  std::int64_t nodes = 0;
  std::int64_t budget = INT64_MAX;
  bool budget_exhausted = false;
  // Some child was skipped because it needed one discrepancy too many.
  bool discrepancy_cutoff = false;
};

// A tree explored by ExploreWithDiscrepancies.
//   Refresh()       re-applies global state (e.g. an incumbent cut) to the
//                   current node; false when the node became dead.
//   IsLeaf()/OnLeaf(stats)
//   Choices()       children ordered by the value heuristic, best first.
//   Available(c)    whether a previously listed child is still open.
//   Apply(c)        descends; false when the child fails immediately.
//   Retract()       undoes the most recent Apply, whatever it returned.
template <typename S>
concept SearchSpace = requires(S& s, const typename S::Choice& c,
                               const ExplorationStats& stats) {
  { s.Refresh() } -> std::convertible_to<bool>;
  { s.IsLeaf() } -> std::convertible_to<bool>;
  { s.OnLeaf(stats) };
  { s.Choices() } -> std::convertible_to<std::vector<typename S::Choice>>;
  { s.Available(c) } -> std::convertible_to<bool>;
  { s.Apply(c) } -> std::convertible_to<bool>;
  { s.Retract() };
};

// Depth-first exploration that follows at most `allowed` discrepancies on any
// root-to-leaf path, where taking any child other than the first listed one
// costs one discrepancy. Stops as soon as stats.budget nodes were applied.
template <SearchSpace S>
void ExploreWithDiscrepancies(S& space, int allowed, ExplorationStats& stats) {
  if (!space.Refresh()) return;
  if (space.IsLeaf()) {
    space.OnLeaf(stats);
    return;
  }
  const std::vector<typename S::Choice> choices = space.Choices();
  for (std::size_t i = 0; i < choices.size(); ++i) {
    const int cost = i == 0 ? 0 : 1;
    if (cost > allowed) {
      stats.discrepancy_cutoff = true;
      return;
    }
    if (i > 0 && !space.Refresh()) return;
    if (!space.Available(choices[i])) continue;
    if (stats.nodes >= stats.budget) {
      stats.budget_exhausted = true;
      return;
    }
    ++stats.nodes;
    if (space.Apply(choices[i])) {
      ExploreWithDiscrepancies(space, allowed - cost, stats);
    }
    space.Retract();
    if (stats.budget_exhausted) return;
  }
}

}  // namespace cpdqn

#endif  // CPDQN_SEARCH_DISCREPANCY_SEARCH_H_
