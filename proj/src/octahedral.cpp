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

#include "grlt/octahedral.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

#include "grlt/errors.hpp"

namespace grlt {

Eigen::Matrix3i axis_angle_matrix(const Eigen::Vector3i& axis, int angle_num, int angle_den) {
  const Eigen::Vector3d u = axis.cast<double>().normalized();
  const double theta = std::numbers::pi * angle_num / angle_den;
  Eigen::Matrix3d cross;
  cross << 0, -u.z(), u.y(),
           u.z(), 0, -u.x(),
           -u.y(), u.x(), 0;
  const Eigen::Matrix3d r = std::cos(theta) * Eigen::Matrix3d::Identity() +
                            std::sin(theta) * cross +
                            (1 - std::cos(theta)) * u * u.transpose();
  Eigen::Matrix3i out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double v = std::round(r(i, j));
      if (std::abs(v - r(i, j)) > 1e-9) {
        throw NumericalError("rotation is not an integer matrix");
      }
      out(i, j) = static_cast<int>(v);
    }
  }
  return out;
}

namespace {

OctahedralGroup build_octahedral() {
  OctahedralGroup out;
  auto add = [&out](Eigen::Vector3i axis, int num, int den) {
    out.rotations.push_back({axis, num, den, axis_angle_matrix(axis, num, den)});
  };
  add(Eigen::Vector3i(0, 0, 1), 0, 1);
  for (const Eigen::Vector3i& l :
       {Eigen::Vector3i(1, 0, 0), Eigen::Vector3i(0, 1, 0), Eigen::Vector3i(0, 0, 1)}) {
    for (int k = 1; k <= 3; ++k) add(l, k, 2);
  }
  for (const Eigen::Vector3i& l :
       {Eigen::Vector3i(1, 1, 0), Eigen::Vector3i(1, -1, 0), Eigen::Vector3i(1, 0, 1),
        Eigen::Vector3i(1, 0, -1), Eigen::Vector3i(0, 1, 1), Eigen::Vector3i(0, 1, -1)}) {
    add(l, 1, 1);
  }
  for (const Eigen::Vector3i& l :
       {Eigen::Vector3i(1, 1, 1), Eigen::Vector3i(1, 1, -1), Eigen::Vector3i(1, -1, 1),
        Eigen::Vector3i(-1, 1, 1)}) {
    add(l, 2, 3);
    add(l, 4, 3);
  }

  const int n = static_cast<int>(out.rotations.size());
  auto find = [&out, n](const Eigen::Matrix3i& m) -> int {
    for (int k = 0; k < n; ++k)
      if (out.rotations[k].matrix == m) return k;
    return -1;
  };
  std::vector<std::vector<Element>> table(n, std::vector<Element>(n));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const int c = find(out.rotations[a].matrix * out.rotations[b].matrix);
      if (c < 0) throw NumericalError("octahedral rotations are not closed under products");
      table[a][b] = c;
    }
  }

  // Brute-force search for images of the symmetric(4) generators that extend
  // to an isomorphism S4 -> O.
  const GroupPtr s4 = symmetric(4);
  auto raw = Group::from_table("O", table, {}, {});
  std::optional<std::vector<Element>> phi;
  for (Element x = 0; x < n && !phi; ++x) {
    for (Element y = 0; y < n && !phi; ++y) {
      std::vector<Element> map(n);
      std::vector<bool> hit(n, false);
      bool ok = true;
      for (Element e = 0; e < s4->order() && ok; ++e) {
        Element img = 0;
        for (const Letter& l : s4->word_for(e).letters())
          img = raw->mul(img, raw->power(l.generator == 0 ? x : y, l.exponent));
        if (hit[img]) ok = false;
        hit[img] = true;
        map[e] = img;
      }
      for (Element a = 0; a < s4->order() && ok; ++a)
        for (Element b = 0; b < s4->order() && ok; ++b)
          if (map[s4->mul(a, b)] != raw->mul(map[a], map[b])) ok = false;
      if (ok) phi = std::move(map);
    }
  }
  if (!phi) throw NumericalError("no isomorphism between the octahedral group and S4");

  out.to_symmetric.assign(n, 0);
  for (Element e = 0; e < n; ++e) out.to_symmetric[(*phi)[e]] = e;
  std::vector<Element> gens;
  for (Element g : s4->generators()) gens.push_back((*phi)[g]);
  out.group = Group::from_table("O", std::move(table), std::move(gens), s4->relators(),
                                GroupSpec::octahedral());
  return out;
}

}  // namespace

const OctahedralGroup& octahedral_rotations() {
  static const OctahedralGroup cached = build_octahedral();
  return cached;
}

}  // namespace grlt
