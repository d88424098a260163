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

#include "cpdqn/dqn/replay_buffer.h"

#include <utility>

#include "cpdqn/core/contract.h"

namespace cpdqn {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  Expect(capacity > 0, "ReplayBuffer: capacity must be positive");
  items_.reserve(std::min<std::size_t>(capacity, 1 << 16));
}

void ReplayBuffer::Push(Transition t) {
  Expect(t.observation != nullptr, "ReplayBuffer: transition without observation");
  Expect(t.terminal == (t.next_observation == nullptr),
         "ReplayBuffer: terminal transitions have no next observation");
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
  } else {
    items_[next_] = std::move(t);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::Sample(std::size_t count,
                                              std::mt19937_64& rng) const {
  Expect(!items_.empty(), "ReplayBuffer: sampling from an empty buffer");
  std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
  std::vector<std::size_t> out(count);
  for (std::size_t& i : out) i = pick(rng);
  return out;
}

}  // namespace cpdqn
