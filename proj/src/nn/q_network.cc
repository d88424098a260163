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

#include "cpdqn/nn/q_network.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "cpdqn/core/contract.h"

namespace cpdqn {
namespace {

constexpr int kCheckpointVersion = 1;

const char* PoolingName(Pooling p) { return p == Pooling::kMean ? "mean" : "sum"; }

}  // namespace

QNetwork::QNetwork(const GnnConfig& config, std::uint64_t seed) : config_(config) {
  Expect(config.embedding_dim > 0 && config.decoder_dim > 0 && config.hidden > 0,
         "QNetwork: widths must be positive");
  Expect(config.layers >= 0, "QNetwork: negative layer count");
  Expect(config.slope >= 0.0 && config.slope < 1.0, "QNetwork: slope must be in [0, 1)");
  std::mt19937_64 rng(seed);
  const int d = config.embedding_dim;
  input_variable_ = AddWeight("input.variable", TripartiteGraph::kVariableFeatures, d, rng);
  input_constraint_ =
      AddWeight("input.constraint", TripartiteGraph::kConstraintFeatures, d, rng);
  input_value_ = AddWeight("input.value", TripartiteGraph::kValueFeatures, d, rng);
  for (int k = 0; k < config.layers; ++k) {
    const std::string prefix = "layer" + std::to_string(k) + ".";
    LayerParams lp;
    for (int i = 0; i < 10; ++i) {
      lp.theta[i] = AddWeight(prefix + "theta" + std::to_string(i + 1), d, d, rng);
    }
    lp.mix_variable = AddWeight(prefix + "mix_variable", 4 * d, d, rng);
    lp.mix_constraint = AddWeight(prefix + "mix_constraint", 3 * d, d, rng);
    lp.mix_value = AddWeight(prefix + "mix_value", 3 * d, d, rng);
    layers_.push_back(lp);
  }
  const int h = config.hidden;
  const int l = config.decoder_dim;
  const int side[] = {d, h, l};
  decode_variable_ = AddMlp("decoder.variable", side, rng);
  decode_value_ = AddMlp("decoder.value", side, rng);
  const int q[] = {2 * l, h, h, 1};
  decode_q_ = AddMlp("decoder.q", q, rng);
}

int QNetwork::AddWeight(const std::string& name, int rows, int cols,
                        std::mt19937_64& rng) {
  const int id = params_.Add(name, rows, cols);
  const double limit = std::sqrt(6.0 / (rows + cols));
  std::uniform_real_distribution<double> u(-limit, limit);
  Matrix& w = params_[id].value;
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = u(rng);
  return id;
}

std::vector<QNetwork::Dense> QNetwork::AddMlp(const std::string& name,
                                              std::span<const int> widths,
                                              std::mt19937_64& rng) {
  std::vector<Dense> out;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
    const std::string prefix = name + "." + std::to_string(i) + ".";
    Dense layer;
    layer.weight = AddWeight(prefix + "weight", widths[i], widths[i + 1], rng);
    layer.bias = params_.Add(prefix + "bias", 1, widths[i + 1]);
    out.push_back(layer);
  }
  return out;
}

Tape::Var QNetwork::Linear(Tape& tape, Tape::Var x, int weight) const {
  return tape.MatMul(x, tape.Param(params_, weight));
}

Tape::Var QNetwork::Mlp(Tape& tape, const std::vector<Dense>& layers,
                        Tape::Var x) const {
  for (std::size_t i = 0; i < layers.size(); ++i) {
    x = tape.AddRowBias(Linear(tape, x, layers[i].weight),
                        tape.Param(params_, layers[i].bias));
    if (i + 1 < layers.size()) x = tape.LeakyRelu(x, config_.slope);
  }
  return x;
}

Embeddings QNetwork::InitialEmbeddings(Tape& tape, const GraphBatch& batch) const {
  Embeddings h;
  h.variables = Linear(tape, tape.Constant(batch.variable_features), input_variable_);
  h.constraints =
      Linear(tape, tape.Constant(batch.constraint_features), input_constraint_);
  h.values = Linear(tape, tape.Constant(batch.value_features), input_value_);
  return h;
}

Embeddings QNetwork::Layer(Tape& tape, const GraphBatch& b, const Embeddings& h0,
                           const Embeddings& h, int k) const {
  Expect(k >= 0 && k < config_.layers, "QNetwork::Layer: no such layer");
  const LayerParams& p = layers_[k];
  const Pooling pool = config_.pooling;
  const double slope = config_.slope;
  // Pooling is linear, so aggregating before the slot matrix is equivalent.
  auto slot = [&](Tape::Var x, int theta) { return Linear(tape, x, p.theta[theta]); };

  Embeddings next;
  {
    const Tape::Var parts[] = {
        slot(h0.variables, 0), slot(h.variables, 1),
        slot(tape.Aggregate(h.constraints, b.variable_from_constraint, pool), 2),
        slot(tape.Aggregate(h.values, b.variable_from_value, pool), 3)};
    next.variables = Linear(tape, tape.LeakyRelu(tape.Concat(parts), slope), p.mix_variable);
  }
  {
    const Tape::Var parts[] = {
        slot(h0.constraints, 4), slot(h.constraints, 5),
        slot(tape.Aggregate(h.variables, b.constraint_from_variable, pool), 6)};
    next.constraints =
        Linear(tape, tape.LeakyRelu(tape.Concat(parts), slope), p.mix_constraint);
  }
  {
    const Tape::Var parts[] = {
        slot(h0.values, 7), slot(h.values, 8),
        slot(tape.Aggregate(h.variables, b.value_from_variable, pool), 9)};
    next.values = Linear(tape, tape.LeakyRelu(tape.Concat(parts), slope), p.mix_value);
  }
  return next;
}

Embeddings QNetwork::Embed(Tape& tape, const GraphBatch& batch) const {
  const Embeddings h0 = InitialEmbeddings(tape, batch);
  Embeddings h = h0;
  for (int k = 0; k < config_.layers; ++k) h = Layer(tape, batch, h0, h, k);
  return h;
}

Tape::Var QNetwork::Decode(Tape& tape, const GraphBatch& batch,
                           const Embeddings& h) const {
  Expect(batch.num_candidates() > 0, "QNetwork::Decode: no candidates");
  const Tape::Var branch = Mlp(tape, decode_variable_,
                               tape.GatherRows(h.variables, batch.branch_rows));
  const Tape::Var left = tape.GatherRows(branch, batch.candidate_sample);
  const Tape::Var right = Mlp(tape, decode_value_,
                              tape.GatherRows(h.values, batch.candidate_rows));
  const Tape::Var both[] = {left, right};
  return Mlp(tape, decode_q_, tape.Concat(both));
}

Tape::Var QNetwork::Forward(Tape& tape, const GraphBatch& batch) const {
  return Decode(tape, batch, Embed(tape, batch));
}

std::vector<double> QNetwork::QValues(const GraphBatch& batch) const {
  Tape tape(/*record_gradients=*/false);
  const Matrix& q = tape.value(Forward(tape, batch));
  return std::vector<double>(q.data(), q.data() + q.size());
}

std::vector<double> QNetwork::QValues(const TripartiteGraph& graph) const {
  const TripartiteGraph* one[] = {&graph};
  return QValues(BatchAllCandidates(one));
}

void QNetwork::Save(std::ostream& out) const {
  const auto precision = out.precision(17);
  out << "cpdqn-checkpoint " << kCheckpointVersion << "\n";
  out << "embedding_dim " << config_.embedding_dim << "\n";
  out << "decoder_dim " << config_.decoder_dim << "\n";
  out << "layers " << config_.layers << "\n";
  out << "pooling " << PoolingName(config_.pooling) << "\n";
  out << "slope " << config_.slope << "\n";
  out << "hidden " << config_.hidden << "\n";
  out << "parameters " << params_.size() << "\n";
  for (const Parameter& p : params_) {
    out << p.name << " " << p.value.rows() << " " << p.value.cols() << "\n";
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      out << (i ? " " : "") << p.value.data()[i];
    }
    out << "\n";
  }
  out.precision(precision);
}

namespace {

void ExpectKey(std::istream& in, const char* key) {
  std::string got;
  if (!(in >> got) || got != key) {
    throw std::runtime_error(std::string("checkpoint: expected '") + key + "'");
  }
}

template <typename T>
T ReadField(std::istream& in, const char* key) {
  ExpectKey(in, key);
  T value{};
  if (!(in >> value)) throw std::runtime_error(std::string("checkpoint: bad ") + key);
  return value;
}

}  // namespace

QNetwork QNetwork::Load(std::istream& in) {
  if (ReadField<int>(in, "cpdqn-checkpoint") != kCheckpointVersion) {
    throw std::runtime_error("checkpoint: unsupported version");
  }
  GnnConfig config;
  config.embedding_dim = ReadField<int>(in, "embedding_dim");
  config.decoder_dim = ReadField<int>(in, "decoder_dim");
  config.layers = ReadField<int>(in, "layers");
  const std::string pooling = ReadField<std::string>(in, "pooling");
  if (pooling == "mean") {
    config.pooling = Pooling::kMean;
  } else if (pooling == "sum") {
    config.pooling = Pooling::kSum;
  } else {
    throw std::runtime_error("checkpoint: unknown pooling " + pooling);
  }
  config.slope = ReadField<double>(in, "slope");
  config.hidden = ReadField<int>(in, "hidden");
  if (config.embedding_dim <= 0 || config.decoder_dim <= 0 || config.hidden <= 0 ||
      config.layers < 0 || config.layers > 64 || !(config.slope >= 0.0 && config.slope < 1.0)) {
    throw std::runtime_error("checkpoint: invalid hyperparameters");
  }
  QNetwork net(config, 0);
  const int count = ReadField<int>(in, "parameters");
  if (count != net.params_.size()) {
    throw std::runtime_error("checkpoint: parameter count mismatch");
  }
  for (Parameter& p : net.params_) {
    std::string name;
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> name >> rows >> cols)) throw std::runtime_error("checkpoint: truncated");
    if (name != p.name) throw std::runtime_error("checkpoint: unexpected parameter " + name);
    if (rows != p.value.rows() || cols != p.value.cols()) {
      throw std::runtime_error("checkpoint: shape mismatch for " + name);
    }
    for (Eigen::Index i = 0; i < p.value.size(); ++i) {
      if (!(in >> p.value.data()[i])) throw std::runtime_error("checkpoint: truncated");
    }
  }
  if (!net.params_.AllFinite()) throw std::runtime_error("checkpoint: non-finite weight");
  return net;
}

int Argmax(std::span<const double> q) {
  Expect(!q.empty(), "Argmax: no values");
  int best = 0;
  for (int i = 1; i < static_cast<int>(q.size()); ++i) {
    if (q[i] > q[best]) best = i;
  }
  return best;
}

int SelectAction(std::span<const double> q, double epsilon, std::mt19937_64& rng) {
  Expect(!q.empty(), "SelectAction: no candidates");
  Expect(epsilon >= 0.0 && epsilon <= 1.0, "SelectAction: epsilon outside [0, 1]");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(q.size()) - 1);
    return pick(rng);
  }
  return Argmax(q);
}

}  // namespace cpdqn
