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

#pragma once

#include <Eigen/Core>

namespace grlt {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  /// Decoupled: parameters are multiplied by (1 - lr * weight_decay) first.
  double weight_decay = 0.0;
};

/// Bias-corrected Adam over a flat parameter vector.
class Adam {
 public:
  Adam(Eigen::Index size, AdamOptions options);

  void step(Eigen::Ref<Eigen::VectorXd> params, const Eigen::Ref<const Eigen::VectorXd>& grads);

  long steps() const { return step_; }
  const AdamOptions& options() const { return options_; }
  const Eigen::VectorXd& first_moment() const { return m_; }
  const Eigen::VectorXd& second_moment() const { return v_; }

 private:
  AdamOptions options_;
  long step_ = 0;
  Eigen::VectorXd m_, v_;
};

}  // namespace grlt
