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

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "grlt/representation.hpp"

namespace grlt {

struct Irrep {
  std::string name;
  int dim = 1;
  /// Indexed by element.
  Eigen::VectorXcd character;
  /// One dim x dim matrix per element realizing the irrep.
  std::vector<Eigen::MatrixXcd> realization;
};

struct CharacterTable {
  GroupPtr group;
  std::vector<Irrep> irreps;

  ComplexRepresentation realization(std::size_t irrep) const {
    return ComplexRepresentation(group, irreps.at(irrep).realization);
  }
};

/// Irreducible characters and realizations for cyclic, dihedral, symmetric,
/// octahedral and product groups. Tables are built once per group
/// name and validated for orthonormality. Throws MissingTableError otherwise.
std::shared_ptr<const CharacterTable> char_table(const GroupPtr& group);

/// Largest |<chi_i, chi_j> - delta_ij| over all pairs of irreps.
double orthonormality_defect(const CharacterTable& table);

struct Multiplicities {
  Eigen::VectorXd raw;
  Eigen::VectorXi rounded;
  double max_rounding_error = 0.0;
  /// Largest imaginary part seen in the inner products.
  double imaginary_residue = 0.0;
  /// sum_i rounded_i * dim_i == representation dimension.
  bool dimension_consistent = true;
};

/// Multiplicity of every irrep of `table` in a representation with the
/// given character and dimension.
Multiplicities decompose_character(const Eigen::VectorXcd& chi, int dim,
                                   const CharacterTable& table);

template <typename Scalar>
Multiplicities decompose(const Representation<Scalar>& rep, const CharacterTable& table) {
  if (!same_group(rep.group(), *table.group))
    throw IncompatibleError("representation and character table use different groups");
  return decompose_character(character(rep), rep.dim(), table);
}

}  // namespace grlt
