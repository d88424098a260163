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

// Heterogeneous message passing over the tripartite graph and the Q-value
// decoder on top of it.

#ifndef CPDQN_NN_Q_NETWORK_H_
#define CPDQN_NN_Q_NETWORK_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "cpdqn/encoder/tripartite_graph.h"
#include "cpdqn/nn/graph_batch.h"
#include "cpdqn/nn/tape.h"

namespace cpdqn {

struct GnnConfig {
  int embedding_dim = 32;
  int decoder_dim = 32;
  int layers = 3;
  Pooling pooling = Pooling::kMean;
  double slope = 0.01;
  int hidden = 32;

  bool operator==(const GnnConfig&) const = default;
};

struct Embeddings {
  Tape::Var variables = -1;
  Tape::Var constraints = -1;
  Tape::Var values = -1;
};

class QNetwork {
 public:
  // Glorot-uniform weights and zero biases drawn from `seed`.
  QNetwork(const GnnConfig& config, std::uint64_t seed);

  const GnnConfig& config() const { return config_; }
  ParameterSet& parameters() { return params_; }
  const ParameterSet& parameters() const { return params_; }

  Embeddings InitialEmbeddings(Tape& tape, const GraphBatch& batch) const;
  // Layer k (0-based) of the message passing.
  Embeddings Layer(Tape& tape, const GraphBatch& batch, const Embeddings& initial,
                   const Embeddings& current, int k) const;
  Embeddings Embed(Tape& tape, const GraphBatch& batch) const;
  // One row per candidate of `batch`.
  Tape::Var Decode(Tape& tape, const GraphBatch& batch, const Embeddings& h) const;
  Tape::Var Forward(Tape& tape, const GraphBatch& batch) const;

  std::vector<double> QValues(const GraphBatch& batch) const;
  // Q-value of each candidate of `graph`, in candidate order.
  std::vector<double> QValues(const TripartiteGraph& graph) const;

  void Save(std::ostream& out) const;
  // Throws std::runtime_error on a malformed file or a shape mismatch.
  static QNetwork Load(std::istream& in);

 private:
  struct Dense {
    int weight;
    int bias;
  };
  struct LayerParams {
    std::array<int, 10> theta;
    int mix_variable;
    int mix_constraint;
    int mix_value;
  };

  int AddWeight(const std::string& name, int rows, int cols, std::mt19937_64& rng);
  std::vector<Dense> AddMlp(const std::string& name, std::span<const int> widths,
                            std::mt19937_64& rng);
  Tape::Var Mlp(Tape& tape, const std::vector<Dense>& layers, Tape::Var x) const;
  Tape::Var Linear(Tape& tape, Tape::Var x, int weight) const;

  GnnConfig config_;
  ParameterSet params_;
  int input_variable_ = -1;
  int input_constraint_ = -1;
  int input_value_ = -1;
  std::vector<LayerParams> layers_;
  std::vector<Dense> decode_variable_;
  std::vector<Dense> decode_value_;
  std::vector<Dense> decode_q_;
};

// Greedy index of the largest value; ties go to the lowest index.
int Argmax(std::span<const double> q);

// With probability epsilon a uniform index, otherwise Argmax.
int SelectAction(std::span<const double> q, double epsilon, std::mt19937_64& rng);

}  // namespace cpdqn

#endif  // CPDQN_NN_Q_NETWORK_H_
