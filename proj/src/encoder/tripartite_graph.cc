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

#include "cpdqn/encoder/tripartite_graph.h"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cpdqn/core/contract.h"

namespace cpdqn {

TripartiteGraph Encode(const Model& model, int branch_variable) {
  Expect(branch_variable >= 0 && branch_variable < model.num_variables(),
         "Encode: no branching variable (terminal state?)");
  Expect(!model.domain(branch_variable).empty(),
         "Encode: branching variable has an empty domain");
  TripartiteGraph g;
  const int nv = model.num_variables();
  const int nc = model.num_constraints();

  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  for (int v = 0; v < nv; ++v) {
    for (int value : model.domain(v).SortedInitialValues()) {
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
  }
  std::vector<int> node_of(static_cast<std::size_t>(hi - lo + 1), -1);
  for (int v = 0; v < nv; ++v) {
    for (int value : model.domain(v).SortedInitialValues()) node_of[value - lo] = 0;
  }
  for (int i = 0; i <= hi - lo; ++i) {
    if (node_of[i] == 0) {
      node_of[i] = static_cast<int>(g.value_labels.size());
      g.value_labels.push_back(lo + i);
    }
  }
  const int nval = static_cast<int>(g.value_labels.size());

  g.raw.variables = FeatureMatrix(nv, TripartiteGraph::kVariableFeatures);
  for (int v = 0; v < nv; ++v) {
    const Domain& d = model.domain(v);
    g.raw.variables.at(v, 0) = d.size();
    g.raw.variables.at(v, 1) = d.initial_size();
    g.raw.variables.at(v, 2) = d.fixed() ? 1.0 : 0.0;
    g.raw.variables.at(v, 3) = model.is_objective(v) ? 1.0 : 0.0;
  }
  g.raw.constraints = FeatureMatrix(nc, TripartiteGraph::kConstraintFeatures);
  for (int c = 0; c < nc; ++c) {
    const Constraint& con = model.constraint(c);
    g.raw.constraints.at(c, static_cast<int>(con.kind)) = 1.0;
    g.raw.constraints.at(c, kNumConstraintKinds) =
        model.reduced_domains(c) ? 1.0 : 0.0;
    std::vector<int> scope = con.scope;
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    for (int v : scope) g.variable_constraint.push_back({v, c});
  }
  g.raw.values = FeatureMatrix(nval, TripartiteGraph::kValueFeatures);
  for (int i = 0; i < nval; ++i) g.raw.values.at(i, 0) = g.value_labels[i];

  for (int v = 0; v < nv; ++v) {
    for (int value : model.domain(v).SortedValues()) {
      g.value_variable.push_back({node_of[value - lo], v});
    }
  }
  for (int value : model.domain(branch_variable).SortedValues()) {
    g.candidates.push_back(node_of[value - lo]);
  }
  g.branch_variable = branch_variable;
  g.features = g.raw;
  return g;
}

TripartiteGraph FeatureScaling(TripartiteGraph graph) {
  NodeFeatures f = graph.raw;
  for (int v = 0; v < f.variables.rows; ++v) {
    const double initial = graph.raw.variables.at(v, 1);
    f.variables.at(v, 0) /= initial;
    f.variables.at(v, 1) /= initial;
  }
  if (f.values.rows > 0) {
    const double lo = graph.value_labels.front();
    const double hi = graph.value_labels.back();
    for (int i = 0; i < f.values.rows; ++i) {
      f.values.at(i, 0) = hi > lo ? (graph.raw.values.at(i, 0) - lo) / (hi - lo) : 0.0;
    }
  }
  graph.features = std::move(f);
  graph.scaled = true;
  return graph;
}

namespace {

constexpr int kObservationVersion = 1;

void WriteMatrix(std::ostream& out, const char* name, const FeatureMatrix& m) {
  out << name << " " << m.rows << " " << m.cols << "\n";
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    out << (i ? " " : "") << m.data[i];
  }
  out << "\n";
}

void WriteEdges(std::ostream& out, const char* name,
                const std::vector<TripartiteGraph::Edge>& edges) {
  out << name << " " << edges.size() << "\n";
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out << (i ? " " : "") << edges[i][0] << " " << edges[i][1];
  }
  out << "\n";
}

void WriteInts(std::ostream& out, const char* name, const std::vector<int>& xs) {
  out << name << " " << xs.size() << "\n";
  for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? " " : "") << xs[i];
  out << "\n";
}

void ExpectWord(std::istream& in, const char* word) {
  std::string got;
  if (!(in >> got) || got != word) {
    throw std::runtime_error(std::string("observation: expected '") + word + "'");
  }
}

FeatureMatrix ReadMatrix(std::istream& in, const char* name) {
  ExpectWord(in, name);
  int rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) {
    throw std::runtime_error("observation: bad matrix shape");
  }
  FeatureMatrix m(rows, cols);
  for (double& x : m.data) {
    if (!(in >> x)) throw std::runtime_error("observation: truncated matrix");
  }
  return m;
}

std::vector<TripartiteGraph::Edge> ReadEdges(std::istream& in, const char* name) {
  ExpectWord(in, name);
  std::size_t n = 0;
  if (!(in >> n)) throw std::runtime_error("observation: bad edge count");
  std::vector<TripartiteGraph::Edge> edges(n);
  for (auto& e : edges) {
    if (!(in >> e[0] >> e[1])) throw std::runtime_error("observation: truncated edges");
  }
  return edges;
}

std::vector<int> ReadInts(std::istream& in, const char* name) {
  ExpectWord(in, name);
  std::size_t n = 0;
  if (!(in >> n)) throw std::runtime_error("observation: bad count");
  std::vector<int> xs(n);
  for (int& x : xs) {
    if (!(in >> x)) throw std::runtime_error("observation: truncated list");
  }
  return xs;
}

}  // namespace

void WriteObservation(std::ostream& out, const TripartiteGraph& g) {
  const auto precision = out.precision(17);
  out << "cpdqn-observation " << kObservationVersion << "\n";
  out << "scaled " << (g.scaled ? 1 : 0) << "\n";
  out << "branch " << g.branch_variable << "\n";
  WriteMatrix(out, "raw_variables", g.raw.variables);
  WriteMatrix(out, "raw_constraints", g.raw.constraints);
  WriteMatrix(out, "raw_values", g.raw.values);
  WriteMatrix(out, "variables", g.features.variables);
  WriteMatrix(out, "constraints", g.features.constraints);
  WriteMatrix(out, "values", g.features.values);
  WriteEdges(out, "variable_constraint", g.variable_constraint);
  WriteEdges(out, "value_variable", g.value_variable);
  WriteInts(out, "value_labels", g.value_labels);
  WriteInts(out, "candidates", g.candidates);
  out.precision(precision);
}

TripartiteGraph ReadObservation(std::istream& in) {
  ExpectWord(in, "cpdqn-observation");
  int version = 0;
  if (!(in >> version) || version != kObservationVersion) {
    throw std::runtime_error("observation: unsupported version");
  }
  TripartiteGraph g;
  int scaled = 0;
  ExpectWord(in, "scaled");
  in >> scaled;
  g.scaled = scaled != 0;
  ExpectWord(in, "branch");
  in >> g.branch_variable;
  g.raw.variables = ReadMatrix(in, "raw_variables");
  g.raw.constraints = ReadMatrix(in, "raw_constraints");
  g.raw.values = ReadMatrix(in, "raw_values");
  g.features.variables = ReadMatrix(in, "variables");
  g.features.constraints = ReadMatrix(in, "constraints");
  g.features.values = ReadMatrix(in, "values");
  g.variable_constraint = ReadEdges(in, "variable_constraint");
  g.value_variable = ReadEdges(in, "value_variable");
  g.value_labels = ReadInts(in, "value_labels");
  g.candidates = ReadInts(in, "candidates");
  if (!in) throw std::runtime_error("observation: read failure");
  return g;
}

}  // namespace cpdqn
