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

#ifndef CPDQN_CORE_DOMAIN_H_
#define CPDQN_CORE_DOMAIN_H_

#include <span>
#include <vector>

namespace cpdqn {

class Model;

// Finite integer domain stored as a sparse set over the contiguous range
// [lowest, highest] of its initial values. Removing a value swaps it past the
// live prefix, so restoring removals in LIFO order is O(1) each.
class Domain {
 public:
  Domain(int lowest, int highest);
  // Arbitrary initial set; values outside the set are never live.
  explicit Domain(std::span<const int> values);

  int size() const { return size_; }
  bool empty() const { return size_ == 0; }
  bool fixed() const { return size_ == 1; }
  int initial_size() const { return initial_size_; }

  // Undefined (contract violation) when empty.
  int min() const;
  int max() const;
  // The single value of a fixed domain.
  int value() const;

  bool contains(int v) const {
    if (v < offset_ || v >= offset_ + static_cast<int>(index_.size())) {
      return false;
    }
    return index_[v - offset_] < size_;
  }

  // Live values in unspecified order.
  std::span<const int> values() const {
    return {dense_.data(), static_cast<std::size_t>(size_)};
  }
  std::vector<int> SortedValues() const;
  std::vector<int> SortedInitialValues() const;

  bool operator==(const Domain& other) const;

 private:
  friend class Model;

  // Returns false when the value was already absent.
  bool Remove(int v);
  // Re-inserts the most recently removed value.
  void RestoreLast(int v);

  int offset_ = 0;
  std::vector<int> dense_;
  std::vector<int> index_;
  int size_ = 0;
  int initial_size_ = 0;
  int min_ = 0;
  int max_ = 0;
};

}  // namespace cpdqn

#endif  // CPDQN_CORE_DOMAIN_H_
