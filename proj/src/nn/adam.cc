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

#include "cpdqn/nn/adam.h"

#include <cmath>

#include "cpdqn/core/contract.h"

namespace cpdqn {

Adam::Adam(const ParameterSet& params, const AdamConfig& config) : config_(config) {
  Expect(config.learning_rate > 0.0, "Adam: learning rate must be positive");
  Expect(config.beta1 >= 0.0 && config.beta1 < 1.0 && config.beta2 >= 0.0 &&
             config.beta2 < 1.0,
         "Adam: betas must be in [0, 1)");
  for (const Parameter& p : params) {
    first_.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
    second_.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
  }
}

void Adam::Step(ParameterSet& params) {
  Expect(params.size() == static_cast<int>(first_.size()), "Adam: layout mismatch");
  ++steps_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(steps_));
  for (int i = 0; i < params.size(); ++i) {
    Parameter& p = params[i];
    Matrix& m = first_[i];
    Matrix& v = second_[i];
    m = config_.beta1 * m + (1.0 - config_.beta1) * p.grad;
    v = config_.beta2 * v + (1.0 - config_.beta2) * p.grad.cwiseProduct(p.grad);
    p.value.array() -= config_.learning_rate * (m.array() / c1) /
                       ((v.array() / c2).sqrt() + config_.epsilon);
  }
}

}  // namespace cpdqn
