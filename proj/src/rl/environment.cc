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

#include "cpdqn/rl/environment.h"

#include <algorithm>
#include <utility>

#include "cpdqn/core/contract.h"
#include "cpdqn/search/search.h"

namespace cpdqn {

double IntermediateReward(std::span<const int> previous,
                          std::span<const int> next, int initial_size) {
  Expect(initial_size >= 1, "IntermediateReward: initial size must be >= 1");
  Expect(std::includes(previous.begin(), previous.end(), next.begin(),
                       next.end()),
         "IntermediateReward: new domain is not a subset");
  if (next.empty()) return 0.0;
  const int lo = next.front();
  const int hi = next.back();
  int pruned_above = 0;
  int pruned_below = 0;
  for (int v : previous) {
    if (v > hi) {
      ++pruned_above;
    } else if (v < lo) {
      ++pruned_below;
    }
  }
  return static_cast<double>(pruned_above - pruned_below) / initial_size;
}

double TerminalReward(TerminalKind kind) {
  Expect(kind != TerminalKind::kNone, "TerminalReward: state is not terminal");
  return kind == TerminalKind::kInfeasible ? -1.0 : 0.0;
}

double ScoreReward(TerminalKind kind, int objective, int lo, int hi) {
  Expect(kind != TerminalKind::kNone, "ScoreReward: state is not terminal");
  if (kind == TerminalKind::kInfeasible) return -1.0;
  if (hi == lo) return 0.0;
  return static_cast<double>(hi - objective) / (hi - lo);
}

const EnvState& Environment::Reset(Model model) {
  Expect(model.has_objective(), "Environment: model has no objective");
  state_ = EnvState{std::move(model), -1, 0, TerminalKind::kNone};
  Model& m = state_.model;
  root_reward_ = 0.0;
  if (m.FixPoint() == PropagationStatus::kFailed) {
    initial_size_ = 1;
    Finish(TerminalKind::kInfeasible);
    root_reward_ = TerminalValue(TerminalKind::kInfeasible);
    return state_;
  }
  const Domain& obj = m.domain(m.objective());
  initial_size_ = obj.size();
  initial_min_ = obj.min();
  initial_max_ = obj.max();
  if (m.AllDecisionsFixed()) {
    Finish(TerminalKind::kFeasible);
    root_reward_ = TerminalValue(TerminalKind::kFeasible);
    return state_;
  }
  state_.branch_variable = FirstFail(m);
  return state_;
}

StepOutcome Environment::Step(int value) {
  Expect(!terminal(), "Environment::Step on a terminal state");
  Model& m = state_.model;
  Expect(m.domain(state_.branch_variable).contains(value),
         "Environment::Step: value not in the branching domain");
  const int obj = m.objective();
  const std::vector<int> before = m.domain(obj).SortedValues();

  m.Assign(state_.branch_variable, value);
  ++state_.step;
  TerminalKind kind = TerminalKind::kNone;
  if (m.FixPoint() == PropagationStatus::kFailed) {
    kind = TerminalKind::kInfeasible;
  } else if (m.AllDecisionsFixed()) {
    m.Assign(obj, m.domain(obj).min());
    kind = m.FixPoint() == PropagationStatus::kFailed
               ? TerminalKind::kInfeasible
               : TerminalKind::kFeasible;
  }

  double mid = 0.0;
  if (kind != TerminalKind::kInfeasible) {
    mid = IntermediateReward(before, m.domain(obj).SortedValues(), initial_size_);
  }
  StepOutcome out;
  out.terminal = kind;
  if (kind == TerminalKind::kNone) {
    state_.branch_variable = FirstFail(m);
    out.reward = scheme_ == RewardScheme::kPropagationBased ? mid : 0.0;
  } else {
    Finish(kind);
    out.reward = TerminalValue(kind) +
                 (scheme_ == RewardScheme::kPropagationBased ? mid : 0.0);
  }
  return out;
}

std::optional<int> Environment::objective_value() const {
  if (state_.terminal != TerminalKind::kFeasible) return std::nullopt;
  return state_.model.domain(state_.model.objective()).min();
}

double Environment::TerminalValue(TerminalKind kind) const {
  if (scheme_ == RewardScheme::kPropagationBased) return TerminalReward(kind);
  const int z = kind == TerminalKind::kFeasible
                    ? state_.model.domain(state_.model.objective()).min()
                    : 0;
  return ScoreReward(kind, z, initial_min_, initial_max_);
}

void Environment::Finish(TerminalKind kind) {
  state_.terminal = kind;
  state_.branch_variable = -1;
}

double AccumulatedReward(std::span<const StepOutcome> steps, double root_reward) {
  if (steps.empty()) return root_reward;
  double total = 0.0;
  for (const StepOutcome& s : steps) total += s.reward;
  return total;
}

}  // namespace cpdqn
