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

#ifndef CPDQN_CORE_CONTRACT_H_
#define CPDQN_CORE_CONTRACT_H_

#include <stdexcept>
#include <string>

namespace cpdqn {

// Raised when a caller breaks a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void Expect(bool condition, const char* message) {
  if (!condition) throw ContractViolation(message);
}

inline void Expect(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace cpdqn

#endif  // CPDQN_CORE_CONTRACT_H_
