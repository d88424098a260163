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

#ifndef CPDQN_NN_GRAPH_BATCH_H_
#define CPDQN_NN_GRAPH_BATCH_H_

#include <span>
#include <vector>

#include "cpdqn/encoder/tripartite_graph.h"
#include "cpdqn/nn/tape.h"

namespace cpdqn {

// Disjoint union of observations, ready for one batched forward pass.
struct GraphBatch {
  Matrix variable_features;
  Matrix constraint_features;
  Matrix value_features;

  Adjacency variable_from_constraint;
  Adjacency variable_from_value;
  Adjacency constraint_from_variable;
  Adjacency value_from_variable;

  // One row per sample.
  std::vector<int> branch_rows;
  // One entry per scored candidate: global value row and owning sample.
  std::vector<int> candidate_rows;
  std::vector<int> candidate_sample;
  // Candidates of sample s are [sample_offsets[s], sample_offsets[s + 1]).
  std::vector<int> sample_offsets{0};

  int num_samples() const { return static_cast<int>(branch_rows.size()); }
  int num_candidates() const { return static_cast<int>(candidate_rows.size()); }
};

// Scores every candidate of every graph.
GraphBatch BatchAllCandidates(std::span<const TripartiteGraph* const> graphs);

// Scores one candidate per graph; `chosen[s]` indexes graphs[s]->candidates.
GraphBatch BatchChosenCandidates(std::span<const TripartiteGraph* const> graphs,
                                 std::span<const int> chosen);

}  // namespace cpdqn

#endif  // CPDQN_NN_GRAPH_BATCH_H_
