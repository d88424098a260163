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

#ifndef CPDQN_RL_ENVIRONMENT_H_
#define CPDQN_RL_ENVIRONMENT_H_

#include <optional>
#include <span>
#include <vector>

#include "cpdqn/core/model.h"
#include "cpdqn/rl/reward.h"

namespace cpdqn {

// A partially solved model together with the variable chosen for branching.
struct EnvState {
  Model model;
  // -1 when terminal.
  int branch_variable = -1;
  int step = 0;
  TerminalKind terminal = TerminalKind::kNone;
};

struct StepOutcome {
  double reward = 0.0;
  TerminalKind terminal = TerminalKind::kNone;
};

// The solver seen as an MDP: one episode is a backtrack-free dive from the
// root. Every action assigns a value to the first-fail variable and runs the
// fix point. Once every decision variable is fixed the objective is set to
// its lower bound, which is part of the same step.
class Environment {
 public:
  explicit Environment(RewardScheme scheme = RewardScheme::kPropagationBased)
      : scheme_(scheme) {}

  // Runs the root fix point on `model`. A root failure or an already solved
  // model gives a terminal state whose reward is root_reward().
  const EnvState& Reset(Model model);
  // Requires a non-terminal state and a value of the branching variable.
  StepOutcome Step(int value);

  const EnvState& state() const { return state_; }
  bool terminal() const { return state_.terminal != TerminalKind::kNone; }
  RewardScheme scheme() const { return scheme_; }

  // Objective domain after the root fix point.
  int initial_objective_size() const { return initial_size_; }
  int initial_objective_min() const { return initial_min_; }
  int initial_objective_max() const { return initial_max_; }
  // Objective value of a feasible terminal state.
  std::optional<int> objective_value() const;
  // Terminal reward of an episode that ended during Reset.
  double root_reward() const { return root_reward_; }

 private:
  double TerminalValue(TerminalKind kind) const;
  void Finish(TerminalKind kind);

  RewardScheme scheme_;
  EnvState state_;
  int initial_size_ = 1;
  int initial_min_ = 0;
  int initial_max_ = 0;
  double root_reward_ = 0.0;
};

// Undiscounted return of an episode. An episode without steps is worth its
// root terminal reward.
double AccumulatedReward(std::span<const StepOutcome> steps, double root_reward);

}  // namespace cpdqn

#endif  // CPDQN_RL_ENVIRONMENT_H_
