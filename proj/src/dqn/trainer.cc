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

#include "cpdqn/dqn/trainer.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "cpdqn/core/contract.h"
#include "cpdqn/nn/graph_batch.h"

namespace cpdqn {

double DoubleDqnTarget(double reward, bool terminal, std::span<const double> online_next,
                       std::span<const double> target_next) {
  if (terminal) return reward;
  Expect(!online_next.empty() && online_next.size() == target_next.size(),
         "DoubleDqnTarget: next-state values must be non-empty and aligned");
  return reward + target_next[Argmax(online_next)];
}

std::vector<double> DoubleDqnTargets(std::span<const Transition* const> batch,
                                     const QNetwork& online, const QNetwork& target) {
  std::vector<double> y(batch.size());
  std::vector<const TripartiteGraph*> next;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i]->terminal) {
      y[i] = batch[i]->reward;
    } else {
      next.push_back(batch[i]->next_observation.get());
      owner.push_back(i);
    }
  }
  if (next.empty()) return y;
  const GraphBatch b = BatchAllCandidates(next);
  const std::vector<double> qo = online.QValues(b);
  const std::vector<double> qt = target.QValues(b);
  for (int s = 0; s < b.num_samples(); ++s) {
    const std::size_t begin = b.sample_offsets[s];
    const std::size_t len = b.sample_offsets[s + 1] - begin;
    const Transition& t = *batch[owner[s]];
    y[owner[s]] = DoubleDqnTarget(t.reward, false,
                                  std::span<const double>(qo).subspan(begin, len),
                                  std::span<const double>(qt).subspan(begin, len));
  }
  return y;
}

double EpsilonSchedule::operator()(std::int64_t step) const {
  if (decay_steps <= 0 || step >= decay_steps) return end;
  const double t = static_cast<double>(std::max<std::int64_t>(step, 0)) /
                   static_cast<double>(decay_steps);
  return start + (end - start) * t;
}

void TrainConfig::Validate() const {
  Expect(episodes >= 0, "TrainConfig: episodes must be >= 0");
  Expect(capacity > 0, "TrainConfig: capacity must be positive");
  Expect(batch_size > 0, "TrainConfig: batch size must be positive");
  Expect(target_sync_period > 0, "TrainConfig: target sync period must be positive");
  Expect(0.0 <= epsilon.end && epsilon.end <= epsilon.start && epsilon.start <= 1.0,
         "TrainConfig: need 0 <= epsilon end <= epsilon start <= 1");
  Expect(epsilon.decay_steps >= 0, "TrainConfig: epsilon decay steps must be >= 0");
  Expect(learning_rate > 0.0, "TrainConfig: learning rate must be positive");
  Expect(eval_period > 0, "TrainConfig: eval period must be positive");
  Expect(!patience || *patience > 0, "TrainConfig: patience must be positive");
  Expect(full_dfs_node_limit > 0, "TrainConfig: node limit must be positive");
}

namespace {

std::shared_ptr<const TripartiteGraph> Observe(const Environment& env) {
  return std::make_shared<const TripartiteGraph>(
      EncodeScaled(env.state().model, env.state().branch_variable));
}

int CheckedAction(const Policy& policy, const TripartiteGraph& obs) {
  const int idx = policy(obs);
  Expect(idx >= 0 && idx < static_cast<int>(obs.candidates.size()),
         "policy returned an invalid candidate index");
  return idx;
}

Transition MakeTransition(std::shared_ptr<const TripartiteGraph> obs, int idx,
                          const StepOutcome& out, const Environment& env) {
  Transition t;
  t.action_index = idx;
  t.action_value = obs->value_labels[obs->candidates[idx]];
  t.observation = std::move(obs);
  t.reward = out.reward;
  t.terminal = out.terminal != TerminalKind::kNone;
  if (!t.terminal) t.next_observation = Observe(env);
  return t;
}

Episode RootOnly(const Environment& env) {
  Episode ep;
  ep.stats.terminal = env.state().terminal;
  ep.stats.objective = env.objective_value();
  ep.stats.total_reward = env.root_reward();
  return ep;
}

}  // namespace

Episode RunDiveEpisode(const Model& model, const Policy& policy, RewardScheme scheme,
                       const TransitionSink& sink) {
  Environment env(scheme);
  env.Reset(model);
  if (env.terminal()) return RootOnly(env);
  Episode ep;
  std::shared_ptr<const TripartiteGraph> obs = Observe(env);
  while (!env.terminal()) {
    const int idx = CheckedAction(policy, *obs);
    const StepOutcome out = env.Step(obs->value_labels[obs->candidates[idx]]);
    Transition t = MakeTransition(obs, idx, out, env);
    obs = t.next_observation;
    ep.stats.total_reward += t.reward;
    if (sink) sink(t);
    ep.transitions.push_back(std::move(t));
  }
  ep.stats.steps = static_cast<int>(ep.transitions.size());
  ep.stats.terminal = env.state().terminal;
  ep.stats.objective = env.objective_value();
  return ep;
}

namespace {

struct DfsHarvest {
  const Policy& policy;
  const TransitionSink& sink;
  std::int64_t node_limit;
  std::int64_t nodes = 0;
  Episode episode;

  void Visit(const Environment& env, const std::shared_ptr<const TripartiteGraph>& obs) {
    const int first = CheckedAction(policy, *obs);
    std::vector<int> order = {first};
    for (int i = 0; i < static_cast<int>(obs->candidates.size()); ++i) {
      if (i != first) order.push_back(i);
    }
    for (int idx : order) {
      if (nodes >= node_limit) return;
      ++nodes;
      Environment child = env;
      const StepOutcome out = child.Step(obs->value_labels[obs->candidates[idx]]);
      Transition t = MakeTransition(obs, idx, out, child);
      const auto next = t.next_observation;
      EpisodeStats& s = episode.stats;
      s.total_reward += t.reward;
      if (out.terminal == TerminalKind::kFeasible) {
        const int z = *child.objective_value();
        if (!s.objective || z < *s.objective) s.objective = z;
        s.terminal = TerminalKind::kFeasible;
      } else if (out.terminal == TerminalKind::kInfeasible &&
                 s.terminal == TerminalKind::kNone) {
        s.terminal = TerminalKind::kInfeasible;
      }
      if (sink) sink(t);
      episode.transitions.push_back(std::move(t));
      if (next) Visit(child, next);
    }
  }
};

}  // namespace

Episode RunFullDfsEpisode(const Model& model, const Policy& policy, RewardScheme scheme,
                          std::int64_t node_limit, const TransitionSink& sink) {
  Expect(node_limit > 0, "RunFullDfsEpisode: node limit must be positive");
  Environment env(scheme);
  env.Reset(model);
  if (env.terminal()) return RootOnly(env);
  DfsHarvest dfs{policy, sink, node_limit, 0, {}};
  dfs.Visit(env, Observe(env));
  dfs.episode.stats.steps = static_cast<int>(dfs.episode.transitions.size());
  return std::move(dfs.episode);
}

Policy EpsilonGreedyPolicy(const QNetwork& net, std::function<double()> epsilon,
                           std::mt19937_64& rng) {
  return [&net, epsilon = std::move(epsilon), &rng](const TripartiteGraph& obs) {
    const std::vector<double> q = net.QValues(obs);
    return SelectAction(q, epsilon(), rng);
  };
}

double TrainStep(const ReplayBuffer& buffer, QNetwork& online, const QNetwork& target,
                 Adam& optimizer, int batch_size, std::mt19937_64& rng) {
  Expect(batch_size > 0, "TrainStep: batch size must be positive");
  const std::vector<std::size_t> picks = buffer.Sample(batch_size, rng);
  std::vector<const Transition*> batch;
  std::vector<const TripartiteGraph*> obs;
  std::vector<int> chosen;
  for (std::size_t i : picks) {
    batch.push_back(&buffer[i]);
    obs.push_back(buffer[i].observation.get());
    chosen.push_back(buffer[i].action_index);
  }
  const std::vector<double> y = DoubleDqnTargets(batch, online, target);
  Matrix targets(static_cast<Eigen::Index>(y.size()), 1);
  for (std::size_t i = 0; i < y.size(); ++i) targets(static_cast<Eigen::Index>(i), 0) = y[i];

  const GraphBatch b = BatchChosenCandidates(obs, chosen);
  ParameterSet& params = online.parameters();
  params.ZeroGrad();
  Tape tape;
  const Tape::Var loss = tape.MeanSquaredError(online.Forward(tape, b), targets);
  tape.Backward(loss);
  tape.AccumulateParameterGradients(params);
  optimizer.Step(params);
  return tape.value(loss)(0, 0);
}

int GreedyDiveObjective(const QNetwork& net, const Model& model) {
  const Policy greedy = [&net](const TripartiteGraph& obs) {
    return Argmax(net.QValues(obs));
  };
  Environment env;
  env.Reset(model);
  const int worst = env.state().terminal == TerminalKind::kInfeasible
                        ? model.domain(model.objective()).max()
                        : env.initial_objective_max();
  const Episode ep = RunDiveEpisode(model, greedy, RewardScheme::kPropagationBased);
  return ep.stats.objective.value_or(worst);
}

TrainResult Train(const TrainConfig& config, const InstanceSampler& sampler,
                  std::span<const Model> validation, const TrainHooks& hooks) {
  config.Validate();
  Expect(static_cast<bool>(sampler) || config.episodes == 0, "Train: no instance sampler");
  std::mt19937_64 master(config.seed);
  QNetwork online(config.network, master());
  std::mt19937_64 instance_rng(master());
  std::mt19937_64 policy_rng(master());
  std::mt19937_64 sample_rng(master());
  QNetwork target = online;
  Adam optimizer(online.parameters(), AdamConfig{config.learning_rate});
  ReplayBuffer buffer(config.capacity);

  TrainResult result{online, {}, 0, 0, 0};
  const std::size_t ready = std::max<std::size_t>(config.warmup, 1);
  double loss_sum = 0.0;
  int loss_count = 0;
  double best = std::numeric_limits<double>::infinity();
  int stale = 0;

  const Policy policy = EpsilonGreedyPolicy(
      online, [&] { return config.epsilon(result.env_steps); }, policy_rng);
  const TransitionSink sink = [&](const Transition& t) {
    buffer.Push(t);
    ++result.env_steps;
    if (buffer.size() < ready) return;
    loss_sum += TrainStep(buffer, online, target, optimizer, config.batch_size, sample_rng);
    ++loss_count;
    ++result.train_steps;
    if (result.train_steps % config.target_sync_period == 0) {
      target.parameters().CopyValuesFrom(online.parameters());
    }
    if (hooks.after_train_step) hooks.after_train_step(result.train_steps, online, target);
  };

  for (int ep = 0; ep < config.episodes; ++ep) {
    const Model model = sampler(instance_rng);
    if (config.style == EpisodeStyle::kDive) {
      RunDiveEpisode(model, policy, config.reward, sink);
    } else {
      RunFullDfsEpisode(model, policy, config.reward, config.full_dfs_node_limit, sink);
    }
    result.episodes = ep + 1;
    if ((ep + 1) % config.eval_period != 0 || validation.empty()) continue;

    double internal = 0.0;
    double shown = 0.0;
    for (const Model& m : validation) {
      const int z = GreedyDiveObjective(online, m);
      internal += z;
      shown += hooks.report ? hooks.report(z) : static_cast<double>(z);
    }
    internal /= static_cast<double>(validation.size());
    CurveRow row;
    row.step = result.env_steps;
    row.episode = ep + 1;
    row.mean_validation_objective = shown / static_cast<double>(validation.size());
    row.loss = loss_count ? loss_sum / loss_count : std::nan("");
    row.epsilon = config.epsilon(result.env_steps);
    result.curve.push_back(row);
    loss_sum = 0.0;
    loss_count = 0;
    if (internal < best) {
      best = internal;
      result.best = online;
      stale = 0;
    } else if (config.patience && ++stale >= *config.patience) {
      break;
    }
  }
  if (result.curve.empty()) result.best = online;
  return result;
}

void WriteCurve(std::ostream& out, std::span<const CurveRow> rows) {
  const auto precision = out.precision(17);
  out << "step,episode,mean_validation_objective,loss,epsilon\n";
  for (const CurveRow& r : rows) {
    out << r.step << "," << r.episode << "," << r.mean_validation_objective << ","
        << r.loss << "," << r.epsilon << "\n";
  }
  out.precision(precision);
}

std::vector<CurveRow> ReadCurve(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "step,episode,mean_validation_objective,loss,epsilon") {
    throw std::runtime_error("curve: missing header");
  }
  std::vector<CurveRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field[5];
    for (int i = 0; i < 5; ++i) {
      if (!std::getline(ss, field[i], i < 4 ? ',' : '\n')) {
        throw std::runtime_error("curve: short row");
      }
    }
    try {
      CurveRow r;
      r.step = std::stoll(field[0]);
      r.episode = std::stoi(field[1]);
      r.mean_validation_objective = std::stod(field[2]);
      r.loss = std::stod(field[3]);
      r.epsilon = std::stod(field[4]);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw std::runtime_error("curve: bad number in " + line);
    }
  }
  return rows;
}

}  // namespace cpdqn
