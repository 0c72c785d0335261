// Copyright 2026 The grlt Authors
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

#include "grlt/adam.hpp"

#include <cmath>
#include <string>

#include "grlt/errors.hpp"

namespace grlt {

Adam::Adam(Eigen::Index size, AdamOptions options)
    : options_(options), m_(Eigen::VectorXd::Zero(size)), v_(Eigen::VectorXd::Zero(size)) {
  if (!(options_.lr > 0)) throw ConfigError("learning rate must be positive");
  if (!(options_.beta1 >= 0 && options_.beta1 < 1 && options_.beta2 >= 0 && options_.beta2 < 1))
    throw ConfigError("Adam betas must lie in [0, 1)");
  if (!(options_.weight_decay >= 0)) throw ConfigError("weight decay must be non-negative");
}

void Adam::step(Eigen::Ref<Eigen::VectorXd> params,
                const Eigen::Ref<const Eigen::VectorXd>& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size())
    throw ShapeError("Adam state has " + std::to_string(m_.size()) + " entries, got " +
                     std::to_string(params.size()) + " parameters and " +
                     std::to_string(grads.size()) + " gradients");
  ++step_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  m_ = b1 * m_ + (1 - b1) * grads;
  v_ = b2 * v_ + (1 - b2) * grads.cwiseAbs2();
  const double c1 = 1 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1 - std::pow(b2, static_cast<double>(step_));
  if (options_.weight_decay > 0) params *= 1 - options_.lr * options_.weight_decay;
  params.array() -=
      options_.lr * (m_.array() / c1) / ((v_.array() / c2).sqrt() + options_.eps);
}

}  // namespace grlt
