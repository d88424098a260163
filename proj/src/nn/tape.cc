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

#include "cpdqn/nn/tape.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "cpdqn/core/contract.h"

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace cpdqn {
namespace {

#if defined(__GLIBC__)
// A pass allocates and frees tens of megabytes; keeping freed pages in the
// heap avoids fresh page faults on every pass.
const bool kHeapTuned = [] {
  mallopt(M_MMAP_THRESHOLD, 256 << 20);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
  return true;
}();
#endif

}  // namespace

int ParameterSet::Add(std::string name, int rows, int cols) {
  Expect(rows > 0 && cols > 0, "ParameterSet: empty shape");
  Expect(Find(name) < 0, "ParameterSet: duplicate name " + name);
  params_.push_back({std::move(name), Matrix::Zero(rows, cols), Matrix::Zero(rows, cols)});
  return size() - 1;
}

int ParameterSet::Find(const std::string& name) const {
  for (int i = 0; i < size(); ++i) {
    if (params_[i].name == name) return i;
  }
  return -1;
}

void ParameterSet::ZeroGrad() {
  for (Parameter& p : params_) p.grad.setZero();
}

std::size_t ParameterSet::ScalarCount() const {
  std::size_t n = 0;
  for (const Parameter& p : params_) n += p.value.size();
  return n;
}

bool ParameterSet::AllFinite() const {
  for (const Parameter& p : params_) {
    if (!p.value.allFinite()) return false;
  }
  return true;
}

bool ParameterSet::SameValues(const ParameterSet& other) const {
  if (size() != other.size()) return false;
  for (int i = 0; i < size(); ++i) {
    const Matrix& a = params_[i].value;
    const Matrix& b = other.params_[i].value;
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    if (!std::equal(a.data(), a.data() + a.size(), b.data())) return false;
  }
  return true;
}

void ParameterSet::CopyValuesFrom(const ParameterSet& other) {
  Expect(size() == other.size(), "ParameterSet: copy between different layouts");
  for (int i = 0; i < size(); ++i) {
    Expect(params_[i].value.rows() == other.params_[i].value.rows() &&
               params_[i].value.cols() == other.params_[i].value.cols(),
           "ParameterSet: copy between different shapes");
    params_[i].value = other.params_[i].value;
  }
}

Adjacency Adjacency::FromPairs(int num_targets, int num_sources,
                               std::vector<std::pair<int, int>> pairs) {
  Adjacency adj;
  adj.num_targets = num_targets;
  adj.num_sources = num_sources;
  std::sort(pairs.begin(), pairs.end());
  adj.offsets.assign(num_targets + 1, 0);
  adj.sources.reserve(pairs.size());
  for (const auto& [t, s] : pairs) {
    Expect(t >= 0 && t < num_targets && s >= 0 && s < num_sources,
           "Adjacency: index out of range");
    ++adj.offsets[t + 1];
    adj.sources.push_back(s);
  }
  for (int t = 0; t < num_targets; ++t) adj.offsets[t + 1] += adj.offsets[t];
  return adj;
}

Tape::Var Tape::Push(Matrix value, bool requires_grad) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = record_ && requires_grad;
  nodes_.push_back(std::move(node));
  return size() - 1;
}

Tape::Var Tape::Constant(Matrix value) { return Push(std::move(value), false); }

Tape::Var Tape::Param(const ParameterSet& params, int index) {
  Expect(index >= 0 && index < params.size(), "Tape: unknown parameter");
  const Var v = Push(params[index].value, true);
  nodes_[v].parameter = index;
  return v;
}

Tape::Var Tape::MatMul(Var a, Var b) {
  Expect(value(a).cols() == value(b).rows(), "Tape::MatMul: shape mismatch");
  Matrix out(value(a).rows(), value(b).cols());
  out.noalias() = value(a) * value(b);
  const Var c = Push(std::move(out), Needs(a) || Needs(b));
  if (Needs(c)) {
    nodes_[c].backward = [this, a, b, c] {
      const Matrix& g = nodes_[c].grad;
      if (Needs(a)) nodes_[a].grad.noalias() += g * nodes_[b].value.transpose();
      if (Needs(b)) nodes_[b].grad.noalias() += nodes_[a].value.transpose() * g;
    };
  }
  return c;
}

Tape::Var Tape::AddRowBias(Var a, Var bias) {
  Expect(value(bias).rows() == 1 && value(bias).cols() == value(a).cols(),
         "Tape::AddRowBias: shape mismatch");
  Matrix out = value(a);
  out.rowwise() += value(bias).row(0);
  const Var c = Push(std::move(out), Needs(a) || Needs(bias));
  if (Needs(c)) {
    nodes_[c].backward = [this, a, bias, c] {
      const Matrix& g = nodes_[c].grad;
      if (Needs(a)) nodes_[a].grad += g;
      if (Needs(bias)) nodes_[bias].grad += g.colwise().sum();
    };
  }
  return c;
}

Tape::Var Tape::Concat(std::span<const Var> parts) {
  Expect(!parts.empty(), "Tape::Concat: no parts");
  const Eigen::Index rows = value(parts[0]).rows();
  Eigen::Index cols = 0;
  bool needs = false;
  for (Var p : parts) {
    Expect(value(p).rows() == rows, "Tape::Concat: row mismatch");
    cols += value(p).cols();
    needs = needs || Needs(p);
  }
  Matrix out(rows, cols);
  Eigen::Index at = 0;
  for (Var p : parts) {
    out.middleCols(at, value(p).cols()) = value(p);
    at += value(p).cols();
  }
  const Var c = Push(std::move(out), needs);
  if (Needs(c)) {
    std::vector<Var> ids(parts.begin(), parts.end());
    nodes_[c].backward = [this, ids = std::move(ids), c] {
      const Matrix& g = nodes_[c].grad;
      Eigen::Index at = 0;
      for (Var p : ids) {
        const Eigen::Index w = nodes_[p].value.cols();
        if (Needs(p)) nodes_[p].grad += g.middleCols(at, w);
        at += w;
      }
    };
  }
  return c;
}

Tape::Var Tape::LeakyRelu(Var a, double slope) {
  Expect(slope >= 0.0 && slope < 1.0, "Tape::LeakyRelu: slope must be in [0, 1)");
  // max(x, slope * x) is the leaky rectifier for slopes below one.
  Matrix out = value(a).cwiseMax(slope * value(a));
  const Var c = Push(std::move(out), Needs(a));
  if (Needs(c)) {
    nodes_[c].backward = [this, a, c, slope] {
      const auto g = nodes_[c].grad.array();
      nodes_[a].grad.array() += (nodes_[a].value.array() > 0).select(g, slope * g);
    };
  }
  return c;
}

Tape::Var Tape::Aggregate(Var source, const Adjacency& adj, Pooling pooling) {
  const Matrix& src = value(source);
  Expect(src.rows() == adj.num_sources, "Tape::Aggregate: source row mismatch");
  Matrix out = Matrix::Zero(adj.num_targets, src.cols());
  for (int t = 0; t < adj.num_targets; ++t) {
    const int begin = adj.offsets[t];
    const int end = adj.offsets[t + 1];
    if (begin == end) continue;
    for (int i = begin; i < end; ++i) out.row(t) += src.row(adj.sources[i]);
    if (pooling == Pooling::kMean) out.row(t) /= static_cast<double>(end - begin);
  }
  const Var c = Push(std::move(out), Needs(source));
  if (Needs(c)) {
    const Adjacency* a = &adj;
    nodes_[c].backward = [this, source, c, a, pooling] {
      const Matrix& g = nodes_[c].grad;
      Matrix& gs = nodes_[source].grad;
      for (int t = 0; t < a->num_targets; ++t) {
        const int begin = a->offsets[t];
        const int end = a->offsets[t + 1];
        if (begin == end) continue;
        const double scale =
            pooling == Pooling::kMean ? 1.0 / static_cast<double>(end - begin) : 1.0;
        for (int i = begin; i < end; ++i) gs.row(a->sources[i]) += scale * g.row(t);
      }
    };
  }
  return c;
}

Tape::Var Tape::GatherRows(Var a, std::vector<int> rows) {
  const Matrix& src = value(a);
  Matrix out(static_cast<Eigen::Index>(rows.size()), src.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Expect(rows[i] >= 0 && rows[i] < src.rows(), "Tape::GatherRows: row out of range");
    out.row(static_cast<Eigen::Index>(i)) = src.row(rows[i]);
  }
  const Var c = Push(std::move(out), Needs(a));
  if (Needs(c)) {
    nodes_[c].backward = [this, a, c, rows = std::move(rows)] {
      const Matrix& g = nodes_[c].grad;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        nodes_[a].grad.row(rows[i]) += g.row(static_cast<Eigen::Index>(i));
      }
    };
  }
  return c;
}

Tape::Var Tape::MeanSquaredError(Var a, const Matrix& target) {
  const Matrix& x = value(a);
  Expect(x.rows() == target.rows() && x.cols() == target.cols() && x.size() > 0,
         "Tape::MeanSquaredError: shape mismatch");
  Matrix diff = x - target;
  Matrix out(1, 1);
  out(0, 0) = diff.squaredNorm() / static_cast<double>(diff.size());
  const Var c = Push(std::move(out), Needs(a));
  if (Needs(c)) {
    nodes_[c].backward = [this, a, c, diff = std::move(diff)] {
      nodes_[a].grad += (2.0 * nodes_[c].grad(0, 0) / static_cast<double>(diff.size())) * diff;
    };
  }
  return c;
}

Tape::Var Tape::WeightedSum(Var a, const Matrix& weights) {
  Expect(value(a).rows() == weights.rows() && value(a).cols() == weights.cols(),
         "Tape::WeightedSum: shape mismatch");
  Matrix out(1, 1);
  out(0, 0) = value(a).cwiseProduct(weights).sum();
  const Var c = Push(std::move(out), Needs(a));
  if (Needs(c)) {
    nodes_[c].backward = [this, a, c, weights] {
      nodes_[a].grad += nodes_[c].grad(0, 0) * weights;
    };
  }
  return c;
}

void Tape::Backward(Var loss) {
  Expect(record_, "Tape::Backward on a tape without gradients");
  Expect(value(loss).rows() == 1 && value(loss).cols() == 1,
         "Tape::Backward: loss must be a scalar");
  for (int i = 0; i <= loss; ++i) {
    if (nodes_[i].requires_grad) {
      nodes_[i].grad = Matrix::Zero(nodes_[i].value.rows(), nodes_[i].value.cols());
    }
  }
  if (!nodes_[loss].requires_grad) return;
  nodes_[loss].grad(0, 0) = 1.0;
  for (int i = loss; i >= 0; --i) {
    if (nodes_[i].backward) nodes_[i].backward();
  }
}

void Tape::AccumulateParameterGradients(ParameterSet& params) const {
  for (const Node& n : nodes_) {
    if (n.parameter < 0 || n.grad.size() == 0) continue;
    Expect(n.parameter < params.size(), "Tape: parameter set mismatch");
    params[n.parameter].grad += n.grad;
  }
}

}  // namespace cpdqn
