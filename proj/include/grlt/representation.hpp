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

#include <complex>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "grlt/errors.hpp"
#include "grlt/group.hpp"

namespace grlt {

enum class Field { real, complex };

template <typename Scalar>
struct is_complex_scalar : std::false_type {};
template <typename T>
struct is_complex_scalar<std::complex<T>> : std::true_type {};

/// True when both pointers refer to the same group, or to groups with the
/// same order and multiplication table.
bool same_group(const Group& a, const Group& b);

/// Largest ||M[g] M[h] - M[gh]||_max over all pairs of elements.
template <typename Derived>
double homomorphism_residual(const std::vector<Derived>& matrices, const Group& group) {
  if (static_cast<int>(matrices.size()) != group.order())
    throw ShapeError("need one matrix per group element");
  const auto dim = matrices.front().rows();
  for (const auto& m : matrices)
    if (m.rows() != dim || m.cols() != dim) throw ShapeError("matrices must share a square shape");
  double worst = 0.0;
  for (Element g = 0; g < group.order(); ++g) {
    for (Element h = 0; h < group.order(); ++h) {
      const double r =
          (matrices[g] * matrices[h] - matrices[group.mul(g, h)]).cwiseAbs().maxCoeff();
      worst = std::max(worst, r);
    }
  }
  return worst;
}

/// A group representation stored as one dim x dim matrix per element.
template <typename Scalar>
class Representation {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  static constexpr Field field = is_complex_scalar<Scalar>::value ? Field::complex : Field::real;

  /// Checks shapes only; use promote() to also check the homomorphism law.
  Representation(GroupPtr group, std::vector<Matrix> matrices)
      : group_(std::move(group)), matrices_(std::move(matrices)) {
    if (static_cast<int>(matrices_.size()) != group_->order())
      throw ShapeError("representation needs one matrix per group element");
    dim_ = static_cast<int>(matrices_.front().rows());
    if (dim_ < 1) throw ShapeError("representation dimension must be positive");
    for (const Matrix& m : matrices_)
      if (m.rows() != dim_ || m.cols() != dim_)
        throw ShapeError("representation matrices must all be dim x dim");
  }

  const GroupPtr& group_ptr() const { return group_; }
  const Group& group() const { return *group_; }
  int dim() const { return dim_; }
  const Matrix& operator[](Element g) const { return matrices_.at(g); }
  const std::vector<Matrix>& matrices() const { return matrices_; }

 private:
  GroupPtr group_;
  std::vector<Matrix> matrices_;
  int dim_ = 0;
};

using RealRepresentation = Representation<double>;
using ComplexRepresentation = Representation<std::complex<double>>;

/// Wraps matrices as a representation if their homomorphism residual is at
/// most `tol`; throws NumericalError otherwise.
template <typename Scalar>
Representation<Scalar> promote(
    GroupPtr group, std::vector<typename Representation<Scalar>::Matrix> matrices,
    double tol = 1e-2) {
  const double r = homomorphism_residual(matrices, *group);
  if (!(r <= tol))
    throw NumericalError("matrices are not a representation: residual " + std::to_string(r) +
                         " exceeds tolerance " + std::to_string(tol));
  return Representation<Scalar>(std::move(group), std::move(matrices));
}

/// Residual of per-element matrices against the group law.
template <typename Derived>
double verify_representation(const std::vector<Derived>& matrices, const Group& group) {
  return homomorphism_residual(matrices, group);
}

enum class NamedRep { trivial, regular, sign, standard };

/// Trivial, regular (left multiplication), sign and standard representations.
/// Sign and standard need a natural permutation action: symmetric groups,
/// dihedral groups acting on polygon vertices, and the octahedral group via
/// its isomorphism with S4.
RealRepresentation named_rep(const GroupPtr& group, NamedRep kind);

/// Permutation matrices from an action table: action[g][i] is the image of
/// point i under g, and the matrix of g sends e_i to e_{action[g][i]}.
/// Throws ActionAxiomError naming the violating pair.
RealRepresentation permutation_rep(const GroupPtr& group,
                                   const std::vector<std::vector<int>>& action);

/// The permutation action behind sign/standard, or empty if the group has none.
std::vector<std::vector<int>> natural_permutation_action(const Group& group);

/// Orthonormal (Helmert) basis of the zero-sum subspace of R^n, as columns.
Eigen::MatrixXd helmert_basis(int n);

ComplexRepresentation to_complex(const RealRepresentation& rep);

template <typename Scalar>
Representation<Scalar> direct_sum(const Representation<Scalar>& a,
                                  const Representation<Scalar>& b) {
  if (!same_group(a.group(), b.group()))
    throw IncompatibleError("direct sum of representations of different groups");
  using Matrix = typename Representation<Scalar>::Matrix;
  const int n = a.dim() + b.dim();
  std::vector<Matrix> out;
  out.reserve(a.matrices().size());
  for (Element g = 0; g < a.group().order(); ++g) {
    Matrix m = Matrix::Zero(n, n);
    m.topLeftCorner(a.dim(), a.dim()) = a[g];
    m.bottomRightCorner(b.dim(), b.dim()) = b[g];
    out.push_back(std::move(m));
  }
  return Representation<Scalar>(a.group_ptr(), std::move(out));
}

inline ComplexRepresentation direct_sum(const RealRepresentation& a,
                                        const ComplexRepresentation& b) {
  return direct_sum(to_complex(a), b);
}
inline ComplexRepresentation direct_sum(const ComplexRepresentation& a,
                                        const RealRepresentation& b) {
  return direct_sum(a, to_complex(b));
}

template <typename Scalar>
Representation<Scalar> multiple(int n, const Representation<Scalar>& rep) {
  if (n < 1) throw UnsupportedRepresentationError("the zero representation is not materialized");
  Representation<Scalar> acc = rep;
  for (int k = 1; k < n; ++k) acc = direct_sum(acc, rep);
  return acc;
}

/// n copies of the regular representation followed by latent_dim - n|G|
/// trivial coordinates.
RealRepresentation latent_rep(const GroupPtr& group, int latent_dim, int n);

/// Block-diagonal, one latent_rep(group, per_channel_dim, n) block per
/// channel; coordinates are channel-major.
RealRepresentation channelwise_latent_rep(const GroupPtr& group, int channels,
                                          int per_channel_dim, int n);

/// Traces of every element's matrix.
template <typename Scalar>
Eigen::VectorXcd character(const Representation<Scalar>& rep) {
  Eigen::VectorXcd chi(rep.group().order());
  for (Element g = 0; g < rep.group().order(); ++g) chi(g) = std::complex<double>(rep[g].trace());
  return chi;
}

/// (1/|G|) sum_g conj(a(g)) b(g) over two character vectors.
std::complex<double> rep_inner_product(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

template <typename S1, typename S2>
std::complex<double> rep_inner_product(const Representation<S1>& a, const Representation<S2>& b) {
  if (!same_group(a.group(), b.group()))
    throw IncompatibleError("inner product of representations of different groups");
  return rep_inner_product(character(a), character(b));
}

}  // namespace grlt
