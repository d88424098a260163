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

// Minimal dense tensors with reverse-mode gradients.

#ifndef CPDQN_NN_TAPE_H_
#define CPDQN_NN_TAPE_H_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace cpdqn {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
};

class ParameterSet {
 public:
  // Returns the index of the new zero-initialized parameter.
  int Add(std::string name, int rows, int cols);

  int size() const { return static_cast<int>(params_.size()); }
  Parameter& operator[](int i) { return params_[i]; }
  const Parameter& operator[](int i) const { return params_[i]; }
  // -1 if absent.
  int Find(const std::string& name) const;

  void ZeroGrad();
  std::size_t ScalarCount() const;
  bool AllFinite() const;
  // Value equality, bit for bit.
  bool SameValues(const ParameterSet& other) const;
  void CopyValuesFrom(const ParameterSet& other);

  std::vector<Parameter>::iterator begin() { return params_.begin(); }
  std::vector<Parameter>::iterator end() { return params_.end(); }
  std::vector<Parameter>::const_iterator begin() const { return params_.begin(); }
  std::vector<Parameter>::const_iterator end() const { return params_.end(); }

 private:
  std::vector<Parameter> params_;
};

enum class Pooling { kMean, kSum };

// Row-wise neighbourhoods in CSR form: target t reads the source rows
// sources[offsets[t] .. offsets[t + 1]), kept in increasing order so sums do
// not depend on edge order.
struct Adjacency {
  int num_targets = 0;
  int num_sources = 0;
  std::vector<int> offsets{0};
  std::vector<int> sources;

  // `pairs` holds (target, source).
  static Adjacency FromPairs(int num_targets, int num_sources,
                             std::vector<std::pair<int, int>> pairs);
};

// Records operations for one forward pass. Referenced adjacencies must stay
// alive until Backward returns.
class Tape {
 public:
  using Var = int;

  explicit Tape(bool record_gradients = true) : record_(record_gradients) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var Constant(Matrix value);
  Var Param(const ParameterSet& params, int index);

  Var MatMul(Var a, Var b);
  Var AddRowBias(Var a, Var bias);
  Var Concat(std::span<const Var> parts);
  Var LeakyRelu(Var a, double slope);
  // Empty neighbourhoods give zero rows.
  Var Aggregate(Var source, const Adjacency& adjacency, Pooling pooling);
  Var GatherRows(Var a, std::vector<int> rows);
  // Mean over entries of (a - target)^2.
  Var MeanSquaredError(Var a, const Matrix& target);
  // Sum over entries of a .* weights.
  Var WeightedSum(Var a, const Matrix& weights);

  const Matrix& value(Var v) const { return nodes_[v].value; }
  const Matrix& grad(Var v) const { return nodes_[v].grad; }
  int size() const { return static_cast<int>(nodes_.size()); }

  // Requires a 1x1 node on a recording tape.
  void Backward(Var loss);
  // Adds gradients of parameter nodes into `params`.
  void AccumulateParameterGradients(ParameterSet& params) const;

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    int parameter = -1;
    std::function<void()> backward;
  };

  Var Push(Matrix value, bool requires_grad);
  bool Needs(Var v) const { return record_ && nodes_[v].requires_grad; }

  bool record_;
  std::vector<Node> nodes_;
};

}  // namespace cpdqn

#endif  // CPDQN_NN_TAPE_H_
