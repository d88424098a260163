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

#ifndef CPDQN_DQN_REPLAY_BUFFER_H_
#define CPDQN_DQN_REPLAY_BUFFER_H_

#include <cstddef>
#include <memory>
#include <random>
#include <vector>

#include "cpdqn/encoder/tripartite_graph.h"

namespace cpdqn {

struct Transition {
  std::shared_ptr<const TripartiteGraph> observation;
  // Position in observation->candidates and the value it stands for.
  int action_index = 0;
  int action_value = 0;
  double reward = 0.0;
  // Null exactly when terminal.
  std::shared_ptr<const TripartiteGraph> next_observation;
  bool terminal = false;
};

// Fixed-capacity ring; the oldest transition is overwritten first.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void Push(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& operator[](std::size_t i) const { return items_[i]; }

  // Uniform indices, drawn with replacement.
  std::vector<std::size_t> Sample(std::size_t count, std::mt19937_64& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> items_;
};

}  // namespace cpdqn

#endif  // CPDQN_DQN_REPLAY_BUFFER_H_
