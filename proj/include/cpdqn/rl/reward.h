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

#ifndef CPDQN_RL_REWARD_H_
#define CPDQN_RL_REWARD_H_

#include <span>

namespace cpdqn {

enum class TerminalKind { kNone, kFeasible, kInfeasible };

enum class RewardScheme {
  // Intermediate reward from objective-domain pruning plus a -1 on failure.
  kPropagationBased,
  // Sparse baseline: only terminal steps are rewarded.
  kScoreOnly,
};

// Reward for one transition of the objective domain, both given sorted.
// Values pruned above the new maximum count +1, values pruned below the new
// minimum count -1, and the sum is normalized by the root domain size. A
// wiped-out domain yields 0.
double IntermediateReward(std::span<const int> previous,
                          std::span<const int> next, int initial_size);

// -1 for an infeasible leaf, 0 for a feasible one.
double TerminalReward(TerminalKind kind);

// Terminal value of the sparse scheme: (hi - z) / (hi - lo) for a feasible
// objective z where [lo, hi] bounds the root objective domain, -1 on failure.
double ScoreReward(TerminalKind kind, int objective, int lo, int hi);

}  // namespace cpdqn

#endif  // CPDQN_RL_REWARD_H_
