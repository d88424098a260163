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

#ifndef CPDQN_ENCODER_TRIPARTITE_GRAPH_H_
#define CPDQN_ENCODER_TRIPARTITE_GRAPH_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cpdqn/core/model.h"

namespace cpdqn {

// Dense row-major feature block, one row per node.
struct FeatureMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  FeatureMatrix() = default;
  FeatureMatrix(int r, int c) : rows(r), cols(c), data(std::size_t(r) * c, 0.0) {}
  double& at(int r, int c) { return data[std::size_t(r) * cols + c]; }
  double at(int r, int c) const { return data[std::size_t(r) * cols + c]; }
  bool operator==(const FeatureMatrix&) const = default;
};

struct NodeFeatures {
  // [current size, initial size, assigned, objective]
  FeatureMatrix variables;
  // one-hot(kind) followed by the reduced-domains flag
  FeatureMatrix constraints;
  // numeric value
  FeatureMatrix values;
  bool operator==(const NodeFeatures&) const = default;
};

// Observation of a solver state. Variable nodes are model variables in id
// order, constraint nodes are model constraints in id order, and value nodes
// are the distinct integers of all initial domains in increasing order.
struct TripartiteGraph {
  static constexpr int kVariableFeatures = 4;
  static constexpr int kConstraintFeatures = kNumConstraintKinds + 1;
  static constexpr int kValueFeatures = 1;

  using Edge = std::array<std::int32_t, 2>;

  int num_variables() const { return raw.variables.rows; }
  int num_constraints() const { return raw.constraints.rows; }
  int num_values() const { return raw.values.rows; }

  // Features the network consumes; equal to `raw` until FeatureScaling.
  NodeFeatures features;
  NodeFeatures raw;
  bool scaled = false;

  // (variable, constraint) for every scope membership.
  std::vector<Edge> variable_constraint;
  // (value, variable) for every value currently in the variable's domain.
  std::vector<Edge> value_variable;

  std::vector<int> value_labels;
  int branch_variable = -1;
  // Value nodes adjacent to the branching variable, in increasing value.
  std::vector<int> candidates;

  bool operator==(const TripartiteGraph&) const = default;
};

// Requires a branching variable with a non-empty domain.
TripartiteGraph Encode(const Model& model, int branch_variable);

// Sizes divided by the variable's initial size and values min-max scaled to
// [0, 1] over the model's value range. Recomputed from `raw`, so applying it
// twice is the same as applying it once.
TripartiteGraph FeatureScaling(TripartiteGraph graph);

inline TripartiteGraph EncodeScaled(const Model& model, int branch_variable) {
  return FeatureScaling(Encode(model, branch_variable));
}

// Versioned text serialization used for replay persistence.
void WriteObservation(std::ostream& out, const TripartiteGraph& graph);
// Throws std::runtime_error on malformed input.
TripartiteGraph ReadObservation(std::istream& in);

}  // namespace cpdqn

#endif  // CPDQN_ENCODER_TRIPARTITE_GRAPH_H_
