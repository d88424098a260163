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

#include "cpdqn/core/model.h"

#include <algorithm>
#include <string>
#include <utility>

#include "cpdqn/core/contract.h"
#include "cpdqn/core/propagators.h"

namespace cpdqn {

std::string_view ConstraintKindName(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::kNotEqual:
      return "NotEqual";
    case ConstraintKind::kLessOrEqual:
      return "LessOrEqual";
    case ConstraintKind::kSumEquals:
      return "SumEquals";
    case ConstraintKind::kReifiedNotEqual:
      return "ReifiedNotEqual";
  }
  return "Unknown";
}

bool IsSatisfied(const Constraint& c, std::span<const int> assignment) {
  const auto& s = c.scope;
  switch (c.kind) {
    case ConstraintKind::kNotEqual:
      return assignment[s[0]] != assignment[s[1]];
    case ConstraintKind::kLessOrEqual:
      return assignment[s[0]] <= assignment[s[1]];
    case ConstraintKind::kSumEquals: {
      std::int64_t sum = 0;
      for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        sum += static_cast<std::int64_t>(c.coefficients[i]) * assignment[s[i]];
      }
      return sum == assignment[s.back()];
    }
    case ConstraintKind::kReifiedNotEqual: {
      const int b = assignment[s[0]];
      if (b != 0 && b != 1) return false;
      return (b == 1) == (assignment[s[1]] != assignment[s[2]]);
    }
  }
  return false;
}

int Model::AddVariable(int lowest, int highest) {
  Expect(frames_.empty(), "AddVariable after a checkpoint");
  domains_.emplace_back(lowest, highest);
  watchers_.emplace_back();
  return num_variables() - 1;
}

int Model::AddVariable(std::span<const int> values) {
  Expect(frames_.empty(), "AddVariable after a checkpoint");
  domains_.emplace_back(values);
  watchers_.emplace_back();
  return num_variables() - 1;
}

int Model::AddConstraint(Constraint constraint) {
  Expect(frames_.empty(), "AddConstraint after a checkpoint");
  Expect(!constraint.scope.empty(), "AddConstraint: empty scope");
  for (int v : constraint.scope) {
    Expect(v >= 0 && v < num_variables(), "AddConstraint: unknown variable");
  }
  const std::size_t arity = constraint.scope.size();
  switch (constraint.kind) {
    case ConstraintKind::kNotEqual:
    case ConstraintKind::kLessOrEqual:
      Expect(arity == 2, "AddConstraint: binary constraint needs 2 variables");
      break;
    case ConstraintKind::kSumEquals:
      Expect(constraint.coefficients.size() + 1 == arity,
             "AddConstraint: SumEquals needs one coefficient per term");
      break;
    case ConstraintKind::kReifiedNotEqual:
      Expect(arity == 3, "AddConstraint: ReifiedNotEqual needs [b, x, y]");
      break;
  }
  const int id = num_constraints();
  std::vector<int> unique_scope = constraint.scope;
  std::sort(unique_scope.begin(), unique_scope.end());
  unique_scope.erase(std::unique(unique_scope.begin(), unique_scope.end()),
                     unique_scope.end());
  for (int v : unique_scope) watchers_[v].push_back(id);
  constraints_.push_back(std::move(constraint));
  in_queue_.push_back(0);
  reduced_.push_back(0);
  Enqueue(id);
  return id;
}

void Model::SetObjective(int var) {
  Expect(var >= 0 && var < num_variables(), "SetObjective: unknown variable");
  objective_ = var;
}

bool Model::AllDecisionsFixed() const {
  for (int v = 0; v < num_variables(); ++v) {
    if (v != objective_ && !domains_[v].fixed()) return false;
  }
  return true;
}

void Model::Assign(int var, int value) {
  Expect(var >= 0 && var < num_variables(), "Assign: unknown variable");
  Expect(domains_[var].contains(value), "Assign: value not in domain");
  std::vector<int> others;
  for (int v : domains_[var].values()) {
    if (v != value) others.push_back(v);
  }
  for (int v : others) Remove(var, v);
}

bool Model::Remove(int var, int value) {
  Domain& d = domains_[var];
  if (!d.Remove(value)) return false;
  trail_.push_back({var, value});
  if (d.empty()) failed_ = true;
  OnDomainChange(var);
  return true;
}

bool Model::RemoveAbove(int var, int bound) {
  bool changed = false;
  const Domain& d = domains_[var];
  while (!d.empty() && d.max() > bound) changed |= Remove(var, d.max());
  return changed;
}

bool Model::RemoveBelow(int var, int bound) {
  bool changed = false;
  const Domain& d = domains_[var];
  while (!d.empty() && d.min() < bound) changed |= Remove(var, d.min());
  return changed;
}

void Model::OnDomainChange(int var) {
  if (active_ >= 0) active_pruned_ = true;
  for (int c : watchers_[var]) {
    if (c != active_) Enqueue(c);
  }
}

void Model::Enqueue(int c) {
  if (in_queue_[c]) return;
  in_queue_[c] = 1;
  queue_.push_back(c);
}

PropagationStatus Model::FixPoint(std::mt19937_64* shuffle) {
  std::fill(reduced_.begin(), reduced_.end(), 0);
  while (!failed_ && queue_head_ < queue_.size()) {
    if (shuffle != nullptr) {
      std::uniform_int_distribution<std::size_t> pick(queue_head_,
                                                      queue_.size() - 1);
      std::swap(queue_[queue_head_], queue_[pick(*shuffle)]);
    }
    const int c = queue_[queue_head_++];
    in_queue_[c] = 0;
    active_ = c;
    active_pruned_ = false;
    Propagate(*this, constraints_[c]);
    if (active_pruned_) reduced_[c] = 1;
    active_ = -1;
  }
  for (std::size_t i = queue_head_; i < queue_.size(); ++i) {
    in_queue_[queue_[i]] = 0;
  }
  queue_.clear();
  queue_head_ = 0;
  return failed_ ? PropagationStatus::kFailed : PropagationStatus::kConsistent;
}

Checkpoint Model::PushCheckpoint() {
  Frame frame;
  frame.trail_size = trail_.size();
  frame.serial = next_serial_++;
  frame.reduced = reduced_;
  frame.queue.assign(queue_.begin() + queue_head_, queue_.end());
  frame.failed = failed_;
  frames_.push_back(std::move(frame));
  return {frames_.size() - 1, frames_.back().serial};
}

void Model::Restore(Checkpoint marker) {
  Expect(marker.depth < frames_.size() &&
             frames_[marker.depth].serial == marker.serial,
         "Restore: checkpoint is no longer live");
  Frame& frame = frames_[marker.depth];
  while (trail_.size() > frame.trail_size) {
    const TrailEntry e = trail_.back();
    trail_.pop_back();
    domains_[e.var].RestoreLast(e.value);
  }
  reduced_ = std::move(frame.reduced);
  for (std::size_t i = queue_head_; i < queue_.size(); ++i) {
    in_queue_[queue_[i]] = 0;
  }
  queue_ = std::move(frame.queue);
  queue_head_ = 0;
  for (int c : queue_) in_queue_[c] = 1;
  failed_ = frame.failed;
  frames_.resize(marker.depth);
}

}  // namespace cpdqn
