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

// Double deep Q-learning over restart-based dive episodes.

#ifndef CPDQN_DQN_TRAINER_H_
#define CPDQN_DQN_TRAINER_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "cpdqn/core/model.h"
#include "cpdqn/dqn/replay_buffer.h"
#include "cpdqn/nn/adam.h"
#include "cpdqn/nn/q_network.h"
#include "cpdqn/rl/environment.h"

namespace cpdqn {

// y = r for terminal transitions, otherwise r + target[argmax online].
double DoubleDqnTarget(double reward, bool terminal, std::span<const double> online_next,
                       std::span<const double> target_next);

// Targets for a batch of transitions with one batched pass per network.
std::vector<double> DoubleDqnTargets(std::span<const Transition* const> batch,
                                     const QNetwork& online, const QNetwork& target);

struct EpsilonSchedule {
  double start = 1.0;
  double end = 0.05;
  std::int64_t decay_steps = 30000;

  // Linear from start to end over decay_steps, then flat.
  double operator()(std::int64_t step) const;
};

enum class EpisodeStyle {
  kDive,
  // Ablation: transitions harvested along a node-limited depth-first search.
  kFullDfs,
};

struct TrainConfig {
  int episodes = 0;
  std::size_t capacity = 50000;
  std::size_t warmup = 1000;
  int batch_size = 32;
  int target_sync_period = 500;
  EpsilonSchedule epsilon;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  RewardScheme reward = RewardScheme::kPropagationBased;
  EpisodeStyle style = EpisodeStyle::kDive;
  std::int64_t full_dfs_node_limit = 200;
  // Validate every this many episodes.
  int eval_period = 10;
  // Stop after this many validations without improvement.
  std::optional<int> patience;
  GnnConfig network;

  // Throws ContractViolation on inconsistent values.
  void Validate() const;
};

struct EpisodeStats {
  TerminalKind terminal = TerminalKind::kNone;
  std::optional<int> objective;
  int steps = 0;
  double total_reward = 0.0;
};

struct Episode {
  std::vector<Transition> transitions;
  EpisodeStats stats;
};

// Picks a candidate index for an observation.
using Policy = std::function<int(const TripartiteGraph&)>;
// Called once per transition, in order.
using TransitionSink = std::function<void(const Transition&)>;

Episode RunDiveEpisode(const Model& model, const Policy& policy, RewardScheme scheme,
                       const TransitionSink& sink = {});
Episode RunFullDfsEpisode(const Model& model, const Policy& policy, RewardScheme scheme,
                          std::int64_t node_limit, const TransitionSink& sink = {});

// Policy from Q-values with epsilon-greedy exploration.
Policy EpsilonGreedyPolicy(const QNetwork& net, std::function<double()> epsilon,
                           std::mt19937_64& rng);

// One gradient step; returns the batch loss before the update.
double TrainStep(const ReplayBuffer& buffer, QNetwork& online, const QNetwork& target,
                 Adam& optimizer, int batch_size, std::mt19937_64& rng);

// Objective of a greedy dive; an infeasible dive scores the largest value of
// the root objective domain.
int GreedyDiveObjective(const QNetwork& net, const Model& model);

struct CurveRow {
  std::int64_t step = 0;
  int episode = 0;
  double mean_validation_objective = 0.0;
  double loss = 0.0;
  double epsilon = 0.0;
};

struct TrainResult {
  QNetwork best;
  std::vector<CurveRow> curve;
  std::int64_t env_steps = 0;
  std::int64_t train_steps = 0;
  int episodes = 0;
};

using InstanceSampler = std::function<Model(std::mt19937_64&)>;

struct TrainHooks {
  // Maps internal objective values to the scale written in the curve.
  std::function<double(int)> report;
  // Runs after every gradient step and target sync.
  std::function<void(std::int64_t train_step, const QNetwork& online,
                     const QNetwork& target)>
      after_train_step;
};

TrainResult Train(const TrainConfig& config, const InstanceSampler& sampler,
                  std::span<const Model> validation, const TrainHooks& hooks = {});

void WriteCurve(std::ostream& out, std::span<const CurveRow> rows);
std::vector<CurveRow> ReadCurve(std::istream& in);

}  // namespace cpdqn

#endif  // CPDQN_DQN_TRAINER_H_
