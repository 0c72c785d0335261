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

#include <vector>

#include <Eigen/Core>

#include "grlt/group.hpp"

namespace grlt {

/// A rotational symmetry of the cube: integer axis, angle
/// angle_num/angle_den * pi, and the exact integer rotation matrix.
struct RotationElement {
  Eigen::Vector3i axis = Eigen::Vector3i::UnitZ();
  int angle_num = 0;
  int angle_den = 1;
  Eigen::Matrix3i matrix = Eigen::Matrix3i::Identity();
};

/// Rotation about an integer axis by angle_num/angle_den * pi, rounded to the
/// exact integer matrix. Throws NumericalError if the result is not integral.
Eigen::Matrix3i axis_angle_matrix(const Eigen::Vector3i& axis, int angle_num, int angle_den);

struct OctahedralGroup {
  /// The 24 rotations; element e of `group` is rotations[e].
  std::vector<RotationElement> rotations;
  /// Multiplication is matrix product: rotations[mul(a,b)] = R_a * R_b.
  GroupPtr group;
  /// to_symmetric[e] is the image of element e in symmetric(4).
  std::vector<Element> to_symmetric;
};

/// Identity, 9 face-axis, 6 edge-axis and 8 body-diagonal rotations, with an
/// explicit isomorphism onto symmetric(4). Computed once and cached.
const OctahedralGroup& octahedral_rotations();

}  // namespace grlt
