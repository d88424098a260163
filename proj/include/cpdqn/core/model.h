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

#ifndef CPDQN_CORE_MODEL_H_
#define CPDQN_CORE_MODEL_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "cpdqn/core/domain.h"

namespace cpdqn {

// The fixed constraint vocabulary. The order is the one-hot order used by the
// graph encoder.
enum class ConstraintKind {
  kNotEqual = 0,
  kLessOrEqual = 1,
  kSumEquals = 2,
  kReifiedNotEqual = 3,
};
inline constexpr int kNumConstraintKinds = 4;

std::string_view ConstraintKindName(ConstraintKind kind);

// Scope layouts:
//   kNotEqual         [x, y]                x != y
//   kLessOrEqual      [x, y]                x <= y
//   kSumEquals        [x_1 .. x_k, r]       sum_i coefficients[i] * x_i == r
//   kReifiedNotEqual  [b, x, y]             b <=> (x != y), b in {0, 1}
struct Constraint {
  ConstraintKind kind;
  std::vector<int> scope;
  std::vector<int> coefficients;
};

// True when `assignment` (one value per model variable) satisfies `c`.
bool IsSatisfied(const Constraint& c, std::span<const int> assignment);

enum class PropagationStatus { kConsistent, kFailed };

// Opaque handle returned by PushCheckpoint.
struct Checkpoint {
  std::size_t depth = 0;
  std::uint64_t serial = 0;
};

// Finite-domain constraint store. The objective is always minimized; callers
// that maximize negate their objective when they build the model.
class Model {
 public:
  Model() = default;

  int AddVariable(int lowest, int highest);
  int AddVariable(std::span<const int> values);
  // Validates the scope and enqueues the constraint for the next FixPoint.
  int AddConstraint(Constraint constraint);
  void SetObjective(int var);

  int num_variables() const { return static_cast<int>(domains_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const Domain& domain(int var) const { return domains_.at(var); }
  const Constraint& constraint(int c) const { return constraints_.at(c); }
  // Constraints whose scope contains `var`.
  std::span<const int> watchers(int var) const { return watchers_.at(var); }
  int objective() const { return objective_; }
  bool has_objective() const { return objective_ >= 0; }
  bool is_objective(int var) const { return var == objective_; }

  // Every variable other than the objective is fixed.
  bool AllDecisionsFixed() const;

  // D(var) := {value}. Pruning is trailed and watchers are enqueued.
  void Assign(int var, int value);
  // Trailed single-value removal; returns true when something was removed.
  bool Remove(int var, int value);
  bool RemoveAbove(int var, int bound);
  bool RemoveBelow(int var, int bound);

  // Runs queued propagators until nothing changes. When `shuffle` is set the
  // next propagator is drawn uniformly from the queue instead of FIFO.
  PropagationStatus FixPoint(std::mt19937_64* shuffle = nullptr);

  // Some domain is empty.
  bool failed() const { return failed_; }

  // Set iff the constraint's propagator pruned something during the most
  // recent FixPoint call.
  bool reduced_domains(int c) const { return reduced_.at(c) != 0; }

  Checkpoint PushCheckpoint();
  // Restores domains, flags and queue to their state at `marker` and pops it
  // together with every checkpoint pushed after it.
  void Restore(Checkpoint marker);
  std::size_t checkpoint_depth() const { return frames_.size(); }
  std::size_t trail_size() const { return trail_.size(); }

 private:
  struct TrailEntry {
    int var;
    int value;
  };
  struct Frame {
    std::size_t trail_size;
    std::uint64_t serial;
    std::vector<char> reduced;
    std::vector<int> queue;
    bool failed;
  };

  void Enqueue(int c);
  void OnDomainChange(int var);

  std::vector<Domain> domains_;
  std::vector<Constraint> constraints_;
  std::vector<std::vector<int>> watchers_;
  int objective_ = -1;

  std::vector<TrailEntry> trail_;
  std::vector<Frame> frames_;
  std::uint64_t next_serial_ = 1;

  std::vector<int> queue_;
  std::size_t queue_head_ = 0;
  std::vector<char> in_queue_;
  std::vector<char> reduced_;
  int active_ = -1;
  bool active_pruned_ = false;
  bool failed_ = false;
};

}  // namespace cpdqn

#endif  // CPDQN_CORE_MODEL_H_
