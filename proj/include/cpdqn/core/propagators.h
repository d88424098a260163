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

#ifndef CPDQN_CORE_PROPAGATORS_H_
#define CPDQN_CORE_PROPAGATORS_H_

#include "cpdqn/core/model.h"

namespace cpdqn {

// Filtering routines. Each one runs to its own fix-point, only removes values
// through Model::Remove*, and returns true when it pruned anything. None of
// them reports failure: a wiped-out domain is detected by Model::FixPoint.

// Arc consistency: a fixed side removes its value from the other side.
bool PropagateNotEqual(Model& model, const Constraint& c);
// x <= y: prunes x above max(y) and y below min(x).
bool PropagateLessOrEqual(Model& model, const Constraint& c);
// Bounds consistency on sum_i c_i x_i == r.
bool PropagateSumEquals(Model& model, const Constraint& c);
// b <=> x != y.
bool PropagateReifiedNotEqual(Model& model, const Constraint& c);

bool Propagate(Model& model, const Constraint& c);

}  // namespace cpdqn

#endif  // CPDQN_CORE_PROPAGATORS_H_
