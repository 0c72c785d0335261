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

#include <string>
#include <vector>

namespace grlt {

struct GradCheckEntry {
  /// "rule:inverse", "algebra:D3", "l_opt:C4", "network:c4_autoencode", ...
  std::string name;
  int points = 0;
  int skipped = 0;
  double worst = 0.0;
  bool pass = true;
};

struct GradCheckSuite {
  double tolerance = 1e-4;
  std::vector<GradCheckEntry> entries;
  /// Backward rules whose isolated check failed.
  std::vector<std::string> failing_rules;
  bool pass = true;
};

struct GradCheckOptions {
  int loss_points = 10;
  int network_points = 5;
  double tolerance = 1e-4;
  /// Include the desk-size networks (the slowest part of the suite).
  bool networks = true;
};

/// Finite differences over every backward rule in isolation, the algebra loss
/// and regularisers of D1, D3 and C4, l_opt, method_loss and the desk
/// encoder/decoder stacks. Seeds are fixed, so the suite is deterministic.
GradCheckSuite run_gradcheck_suite(const GradCheckOptions& options = {});

std::string format_gradcheck(const GradCheckSuite& suite);

}  // namespace grlt
