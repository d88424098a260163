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

#include "cpdqn/nn/graph_batch.h"

#include <utility>

#include "cpdqn/core/contract.h"

namespace cpdqn {
namespace {

void CopyRows(const FeatureMatrix& from, Matrix& to, int offset) {
  for (int r = 0; r < from.rows; ++r) {
    for (int c = 0; c < from.cols; ++c) to(offset + r, c) = from.at(r, c);
  }
}

// `chosen` empty means all candidates.
GraphBatch Build(std::span<const TripartiteGraph* const> graphs,
                 std::span<const int> chosen) {
  Expect(!graphs.empty(), "GraphBatch: no graphs");
  int nv = 0, nc = 0, nval = 0;
  for (const TripartiteGraph* g : graphs) {
    Expect(g != nullptr, "GraphBatch: null graph");
    Expect(g->features.variables.cols == TripartiteGraph::kVariableFeatures &&
               g->features.constraints.cols == TripartiteGraph::kConstraintFeatures &&
               g->features.values.cols == TripartiteGraph::kValueFeatures,
           "GraphBatch: unexpected feature width");
    nv += g->num_variables();
    nc += g->num_constraints();
    nval += g->num_values();
  }
  GraphBatch b;
  b.variable_features = Matrix::Zero(nv, TripartiteGraph::kVariableFeatures);
  b.constraint_features = Matrix::Zero(nc, TripartiteGraph::kConstraintFeatures);
  b.value_features = Matrix::Zero(nval, TripartiteGraph::kValueFeatures);

  std::vector<std::pair<int, int>> xc, cx, xv, vx;
  int ov = 0, oc = 0, oval = 0;
  for (std::size_t s = 0; s < graphs.size(); ++s) {
    const TripartiteGraph& g = *graphs[s];
    CopyRows(g.features.variables, b.variable_features, ov);
    CopyRows(g.features.constraints, b.constraint_features, oc);
    CopyRows(g.features.values, b.value_features, oval);
    for (const auto& [x, c] : g.variable_constraint) {
      xc.emplace_back(ov + x, oc + c);
      cx.emplace_back(oc + c, ov + x);
    }
    for (const auto& [v, x] : g.value_variable) {
      xv.emplace_back(ov + x, oval + v);
      vx.emplace_back(oval + v, ov + x);
    }
    Expect(g.branch_variable >= 0 && g.branch_variable < g.num_variables(),
           "GraphBatch: graph has no branching variable");
    Expect(!g.candidates.empty(), "GraphBatch: graph has no candidates");
    b.branch_rows.push_back(ov + g.branch_variable);
    auto add = [&](int value_node) {
      b.candidate_rows.push_back(oval + value_node);
      b.candidate_sample.push_back(static_cast<int>(s));
    };
    if (chosen.empty()) {
      for (int v : g.candidates) add(v);
    } else {
      const int i = chosen[s];
      Expect(i >= 0 && i < static_cast<int>(g.candidates.size()),
             "GraphBatch: chosen candidate out of range");
      add(g.candidates[i]);
    }
    b.sample_offsets.push_back(b.num_candidates());
    ov += g.num_variables();
    oc += g.num_constraints();
    oval += g.num_values();
  }
  b.variable_from_constraint = Adjacency::FromPairs(nv, nc, std::move(xc));
  b.constraint_from_variable = Adjacency::FromPairs(nc, nv, std::move(cx));
  b.variable_from_value = Adjacency::FromPairs(nv, nval, std::move(xv));
  b.value_from_variable = Adjacency::FromPairs(nval, nv, std::move(vx));
  return b;
}

}  // namespace

GraphBatch BatchAllCandidates(std::span<const TripartiteGraph* const> graphs) {
  return Build(graphs, {});
}

GraphBatch BatchChosenCandidates(std::span<const TripartiteGraph* const> graphs,
                                 std::span<const int> chosen) {
  Expect(chosen.size() == graphs.size(), "GraphBatch: one choice per graph");
  return Build(graphs, chosen);
}

}  // namespace cpdqn
