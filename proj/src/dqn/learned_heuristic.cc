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

#include "cpdqn/dqn/learned_heuristic.h"

#include <algorithm>
#include <numeric>

#include "cpdqn/encoder/tripartite_graph.h"

namespace cpdqn {

std::vector<int> LearnedValueHeuristic::Rank(const Model& model, int var) {
  const TripartiteGraph obs = EncodeScaled(model, var);
  const std::vector<double> q = net_.QValues(obs);
  std::vector<int> order(q.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return q[a] > q[b]; });
  std::vector<int> values;
  values.reserve(order.size());
  for (int i : order) values.push_back(obs.value_labels[obs.candidates[i]]);
  return values;
}

}  // namespace cpdqn
