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

#include "cpdqn/core/domain.h"

#include <algorithm>
#include <utility>

#include "cpdqn/core/contract.h"

namespace cpdqn {

Domain::Domain(int lowest, int highest) {
  Expect(lowest <= highest, "Domain: empty initial range");
  offset_ = lowest;
  const int width = highest - lowest + 1;
  dense_.resize(width);
  index_.resize(width);
  for (int i = 0; i < width; ++i) {
    dense_[i] = lowest + i;
    index_[i] = i;
  }
  size_ = initial_size_ = width;
  min_ = lowest;
  max_ = highest;
}

Domain::Domain(std::span<const int> values) {
  Expect(!values.empty(), "Domain: empty initial set");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  offset_ = *lo;
  const int width = *hi - *lo + 1;
  std::vector<char> present(width, 0);
  for (int v : values) present[v - offset_] = 1;
  dense_.reserve(width);
  index_.assign(width, 0);
  for (int i = 0; i < width; ++i) {
    if (present[i]) {
      index_[i] = static_cast<int>(dense_.size());
      dense_.push_back(offset_ + i);
    }
  }
  size_ = initial_size_ = static_cast<int>(dense_.size());
  // Absent values sit past the live prefix and are never restored.
  for (int i = 0; i < width; ++i) {
    if (!present[i]) {
      index_[i] = static_cast<int>(dense_.size());
      dense_.push_back(offset_ + i);
    }
  }
  min_ = *lo;
  max_ = *hi;
}

int Domain::min() const {
  Expect(size_ > 0, "Domain::min on empty domain");
  return min_;
}

int Domain::max() const {
  Expect(size_ > 0, "Domain::max on empty domain");
  return max_;
}

int Domain::value() const {
  Expect(size_ == 1, "Domain::value on a domain that is not fixed");
  return dense_[0];
}

std::vector<int> Domain::SortedValues() const {
  std::vector<int> out(dense_.begin(), dense_.begin() + size_);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> Domain::SortedInitialValues() const {
  std::vector<int> out(dense_.begin(), dense_.begin() + initial_size_);
  std::sort(out.begin(), out.end());
  return out;
}

bool Domain::operator==(const Domain& other) const {
  return SortedValues() == other.SortedValues();
}

bool Domain::Remove(int v) {
  if (!contains(v)) return false;
  const int pos = index_[v - offset_];
  const int last = size_ - 1;
  const int moved = dense_[last];
  std::swap(dense_[pos], dense_[last]);
  index_[moved - offset_] = pos;
  index_[v - offset_] = last;
  --size_;
  if (size_ == 0) return true;
  if (v == min_) {
    int next = v + 1;
    while (!contains(next)) ++next;
    min_ = next;
  }
  if (v == max_) {
    int next = v - 1;
    while (!contains(next)) --next;
    max_ = next;
  }
  return true;
}

void Domain::RestoreLast(int v) {
  Expect(size_ < initial_size_ && dense_[size_] == v,
         "Domain: restore out of order");
  if (size_ == 0) {
    min_ = max_ = v;
  } else {
    min_ = std::min(min_, v);
    max_ = std::max(max_, v);
  }
  ++size_;
}

}  // namespace cpdqn
