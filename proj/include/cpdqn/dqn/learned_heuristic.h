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

#ifndef CPDQN_DQN_LEARNED_HEURISTIC_H_
#define CPDQN_DQN_LEARNED_HEURISTIC_H_

#include <vector>

#include "cpdqn/nn/q_network.h"
#include "cpdqn/search/search.h"

namespace cpdqn {

// Ranks values by decreasing Q-value; the state is re-encoded at every node,
// so incumbent cuts are visible to the network. Ties keep increasing value.
class LearnedValueHeuristic : public ValueHeuristic {
 public:
  explicit LearnedValueHeuristic(const QNetwork& net) : net_(net) {}
  std::vector<int> Rank(const Model& model, int var) override;

 private:
  const QNetwork& net_;
};

}  // namespace cpdqn

#endif  // CPDQN_DQN_LEARNED_HEURISTIC_H_
