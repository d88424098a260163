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

#include "cpdqn/core/propagators.h"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace cpdqn {
namespace {

int ClampToInt(std::int64_t v) {
  return static_cast<int>(std::clamp<std::int64_t>(
      v, std::numeric_limits<int>::min(), std::numeric_limits<int>::max()));
}

std::int64_t FloorDiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t CeilDiv(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
  return q;
}

bool AnyEmpty(const Model& model, const Constraint& c) {
  for (int v : c.scope) {
    if (model.domain(v).empty()) return true;
  }
  return false;
}

// Arc consistency for x == y.
bool PropagateEqual(Model& model, int x, int y) {
  bool changed = false;
  bool pass = true;
  while (pass) {
    pass = false;
    for (auto [a, b] : {std::pair{x, y}, std::pair{y, x}}) {
      const Domain& da = model.domain(a);
      const Domain& db = model.domain(b);
      std::vector<int> unsupported;
      for (int v : da.values()) {
        if (!db.contains(v)) unsupported.push_back(v);
      }
      for (int v : unsupported) pass |= model.Remove(a, v);
      if (da.empty()) return true;
    }
    changed |= pass;
  }
  return changed;
}

bool Disjoint(const Domain& a, const Domain& b) {
  const Domain& small = a.size() <= b.size() ? a : b;
  const Domain& large = a.size() <= b.size() ? b : a;
  for (int v : small.values()) {
    if (large.contains(v)) return false;
  }
  return true;
}

}  // namespace

bool PropagateNotEqual(Model& model, const Constraint& c) {
  const int x = c.scope[0];
  const int y = c.scope[1];
  bool changed = false;
  if (AnyEmpty(model, c)) return false;
  if (model.domain(x).fixed()) changed |= model.Remove(y, model.domain(x).value());
  if (model.domain(y).fixed()) changed |= model.Remove(x, model.domain(y).value());
  return changed;
}

bool PropagateLessOrEqual(Model& model, const Constraint& c) {
  const int x = c.scope[0];
  const int y = c.scope[1];
  if (AnyEmpty(model, c)) return false;
  bool changed = model.RemoveAbove(x, model.domain(y).max());
  if (model.domain(x).empty()) return changed;
  changed |= model.RemoveBelow(y, model.domain(x).min());
  return changed;
}

bool PropagateSumEquals(Model& model, const Constraint& c) {
  const std::size_t terms = c.coefficients.size();
  const int result = c.scope.back();
  std::vector<std::int64_t> lo(terms), hi(terms);
  bool changed = false;
  bool pass = true;
  while (pass) {
    pass = false;
    if (AnyEmpty(model, c)) return changed;
    std::int64_t sum_lo = 0;
    std::int64_t sum_hi = 0;
    for (std::size_t i = 0; i < terms; ++i) {
      const Domain& d = model.domain(c.scope[i]);
      const std::int64_t k = c.coefficients[i];
      const std::int64_t a = k * d.min();
      const std::int64_t b = k * d.max();
      lo[i] = std::min(a, b);
      hi[i] = std::max(a, b);
      sum_lo += lo[i];
      sum_hi += hi[i];
    }
    pass |= model.RemoveBelow(result, ClampToInt(sum_lo));
    pass |= model.RemoveAbove(result, ClampToInt(sum_hi));
    if (model.domain(result).empty()) return true;
    const std::int64_t r_lo = model.domain(result).min();
    const std::int64_t r_hi = model.domain(result).max();
    for (std::size_t i = 0; i < terms; ++i) {
      const std::int64_t k = c.coefficients[i];
      if (k == 0) continue;
      const int var = c.scope[i];
      // Bounds on k * x implied by the result and the other terms.
      const std::int64_t term_lo = r_lo - (sum_hi - hi[i]);
      const std::int64_t term_hi = r_hi - (sum_lo - lo[i]);
      std::int64_t x_lo, x_hi;
      if (k > 0) {
        x_lo = CeilDiv(term_lo, k);
        x_hi = FloorDiv(term_hi, k);
      } else {
        x_lo = CeilDiv(term_hi, k);
        x_hi = FloorDiv(term_lo, k);
      }
      pass |= model.RemoveBelow(var, ClampToInt(x_lo));
      pass |= model.RemoveAbove(var, ClampToInt(x_hi));
      if (model.domain(var).empty()) return true;
    }
    changed |= pass;
  }
  return changed;
}

bool PropagateReifiedNotEqual(Model& model, const Constraint& c) {
  const int b = c.scope[0];
  const int x = c.scope[1];
  const int y = c.scope[2];
  bool changed = false;
  bool pass = true;
  while (pass) {
    pass = false;
    if (AnyEmpty(model, c)) return changed;
    pass |= model.RemoveBelow(b, 0);
    pass |= model.RemoveAbove(b, 1);
    if (model.domain(b).empty()) return true;
    const Domain& dx = model.domain(x);
    const Domain& dy = model.domain(y);
    if (model.domain(b).fixed()) {
      if (model.domain(b).value() == 1) {
        if (dx.fixed()) pass |= model.Remove(y, dx.value());
        if (!dy.empty() && dy.fixed()) pass |= model.Remove(x, dy.value());
      } else {
        pass |= PropagateEqual(model, x, y);
      }
    } else if (dx.fixed() && dy.fixed() && dx.value() == dy.value()) {
      pass |= model.Remove(b, 1);
    } else if (Disjoint(dx, dy)) {
      pass |= model.Remove(b, 0);
    }
    changed |= pass;
  }
  return changed;
}

bool Propagate(Model& model, const Constraint& c) {
  switch (c.kind) {
    case ConstraintKind::kNotEqual:
      return PropagateNotEqual(model, c);
    case ConstraintKind::kLessOrEqual:
      return PropagateLessOrEqual(model, c);
    case ConstraintKind::kSumEquals:
      return PropagateSumEquals(model, c);
    case ConstraintKind::kReifiedNotEqual:
      return PropagateReifiedNotEqual(model, c);
  }
  return false;
}

}  // namespace cpdqn
