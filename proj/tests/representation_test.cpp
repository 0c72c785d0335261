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

#include <algorithm>
#include <complex>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/QR>
#include <gtest/gtest.h>

#include "grlt/character_table.hpp"
#include "grlt/errors.hpp"
#include "grlt/matrix_io.hpp"
#include "grlt/octahedral.hpp"
#include "grlt/representation.hpp"

namespace grlt {
namespace {

using cd = std::complex<double>;

// Burnside: the number of orbits of an action equals the average fixed-point count.
int orbit_count(const std::vector<std::vector<int>>& action) {
  const int m = static_cast<int>(action.front().size());
  std::vector<int> label(m);
  for (int i = 0; i < m; ++i) label[i] = i;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& row : action)
      for (int i = 0; i < m; ++i) {
        const int lo = std::min(label[i], label[row[i]]);
        if (label[i] != lo || label[row[i]] != lo) {
          label[i] = label[row[i]] = lo;
          changed = true;
        }
      }
  }
  return static_cast<int>(std::set<int>(label.begin(), label.end()).size());
}

std::vector<int> rounded(const Multiplicities& m) {
  return std::vector<int>(m.rounded.data(), m.rounded.data() + m.rounded.size());
}

TEST(RepresentationTest, NamedRepsAreHomomorphisms) {
  for (const GroupPtr& g : {cyclic(4), dihedral(1), dihedral(3), dihedral(6), symmetric(3),
                            symmetric(4), octahedral_rotations().group}) {
    EXPECT_EQ(verify_representation(named_rep(g, NamedRep::trivial).matrices(), *g), 0.0);
    EXPECT_EQ(verify_representation(named_rep(g, NamedRep::regular).matrices(), *g), 0.0);
    if (g->spec().kind == GroupSpec::Kind::cyclic) continue;
    EXPECT_EQ(verify_representation(named_rep(g, NamedRep::sign).matrices(), *g), 0.0);
    EXPECT_LE(verify_representation(named_rep(g, NamedRep::standard).matrices(), *g), 1e-12);
  }
}

TEST(RepresentationTest, RegularMatricesArePermutations) {
  const GroupPtr g = dihedral(3);
  const RealRepresentation reg = named_rep(g, NamedRep::regular);
  EXPECT_EQ(reg.dim(), 6);
  for (Element e = 0; e < 6; ++e) {
    const Eigen::MatrixXd& m = reg[e];
    EXPECT_TRUE((m.colwise().sum().array() == 1.0).all());
    EXPECT_TRUE((m.rowwise().sum().array() == 1.0).all());
    for (Element h = 0; h < 6; ++h) EXPECT_EQ(m(g->mul(e, h), h), 1.0);
  }
  EXPECT_EQ(reg[0], Eigen::MatrixXd::Identity(6, 6));
}

TEST(RepresentationTest, SignOnCyclicIsUnsupported) {
  EXPECT_THROW(named_rep(cyclic(4), NamedRep::sign), UnsupportedRepresentationError);
}

TEST(RepresentationTest, InnerProductOfRegularAndStandard) {
  const GroupPtr g = dihedral(3);
  const cd ip = rep_inner_product(named_rep(g, NamedRep::regular), named_rep(g, NamedRep::standard));
  EXPECT_NEAR(ip.real(), 2.0, 1e-12);
  EXPECT_NEAR(ip.imag(), 0.0, 1e-12);
}

TEST(RepresentationTest, InnerProductMatchesDirectSum) {
  const GroupPtr g = symmetric(4);
  const auto chi_a = character(named_rep(g, NamedRep::regular));
  const auto chi_b = character(named_rep(g, NamedRep::standard));
  cd sum = 0;
  for (Element e = 0; e < g->order(); ++e) sum += std::conj(chi_a(e)) * chi_b(e);
  EXPECT_NEAR(std::abs(rep_inner_product(chi_a, chi_b) - sum / 24.0), 0.0, 1e-12);
}

TEST(CharacterTableTest, C4GeneratorValues) {
  const auto table = char_table(cyclic(4));
  ASSERT_EQ(table->irreps.size(), 4u);
  const cd expected[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int k = 0; k < 4; ++k) EXPECT_EQ(table->irreps[k].character(1), expected[k]);
  EXPECT_EQ(table->irreps[1].name, "+i");
}

TEST(CharacterTableTest, TablesAreOrthonormalAndComplete) {
  for (const GroupPtr& g :
       {cyclic(1), cyclic(2), cyclic(4), cyclic(9), dihedral(1), dihedral(2), dihedral(3),
        dihedral(4), dihedral(7), symmetric(1), symmetric(2), symmetric(3), symmetric(4),
        symmetric(5), product(dihedral(4), dihedral(4)), product(cyclic(2), dihedral(3)),
        octahedral_rotations().group}) {
    const auto table = char_table(g);
    EXPECT_LE(orthonormality_defect(*table), 1e-9) << g->name();
    EXPECT_EQ(table->irreps.size(), g->conjugacy_classes().size()) << g->name();
    int sum = 0;
    for (const Irrep& irrep : table->irreps) sum += irrep.dim * irrep.dim;
    EXPECT_EQ(sum, g->order()) << g->name();
  }
}

TEST(CharacterTableTest, MissingTables) {
  EXPECT_THROW(char_table(cyclic(65)), MissingTableError);
  const GroupPtr g = cyclic(3);
  const GroupPtr custom = Group::from_table("mystery", g->table(), {1}, {Word{{0, 3}}});
  EXPECT_THROW(char_table(custom), MissingTableError);
}

// Oracles: the (4,1) character is fixed points minus one, (1,1,1,1,1) is the
// sign, and conjugating (3,2) by the sign gives (2,2,1).
TEST(CharacterTableTest, S5FromTableaux) {
  const GroupPtr g = symmetric(5);
  const auto table = char_table(g);
  std::vector<int> dims;
  for (const Irrep& irrep : table->irreps) dims.push_back(irrep.dim);
  EXPECT_EQ(dims, (std::vector<int>{1, 4, 5, 6, 5, 4, 1}));
  const auto perms = symmetric_permutations(5);
  const RealRepresentation sign = named_rep(g, NamedRep::sign);
  for (Element e = 0; e < g->order(); ++e) {
    int fixed = 0;
    for (int k = 0; k < 5; ++k) fixed += perms[e][k] == k;
    EXPECT_NEAR(std::abs(table->irreps[1].character(e) - cd(fixed - 1)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(table->irreps[6].character(e) - cd(sign[e](0, 0))), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(table->irreps[4].character(e) - sign[e](0, 0) * table->irreps[2].character(e)), 0.0,
                1e-12);
  }
  EXPECT_EQ(table->irreps[3].name, "(3,1,1)");
}

TEST(DecomposeTest, RegularContainsEachIrrepDimTimes) {
  for (const GroupPtr& g : {cyclic(4), dihedral(1), dihedral(3), dihedral(4), symmetric(4),
                            product(dihedral(4), dihedral(4)), octahedral_rotations().group}) {
    const auto table = char_table(g);
    const Multiplicities m = decompose(named_rep(g, NamedRep::regular), *table);
    for (std::size_t i = 0; i < table->irreps.size(); ++i)
      EXPECT_EQ(m.rounded(static_cast<Eigen::Index>(i)), table->irreps[i].dim) << g->name();
    EXPECT_LE(m.max_rounding_error, 1e-9);
    EXPECT_TRUE(m.dimension_consistent);
  }
}

TEST(DecomposeTest, D3Examples) {
  const GroupPtr g = dihedral(3);
  const auto table = char_table(g);
  const RealRepresentation reg = named_rep(g, NamedRep::regular);
  EXPECT_EQ(rounded(decompose(reg, *table)), (std::vector<int>{1, 1, 2}));
  const RealRepresentation reg_plus = direct_sum(reg, named_rep(g, NamedRep::trivial));
  EXPECT_EQ(rounded(decompose(reg_plus, *table)), (std::vector<int>{2, 1, 2}));
  const RealRepresentation vertices = permutation_rep(g, natural_permutation_action(*g));
  EXPECT_EQ(rounded(decompose(vertices, *table)), (std::vector<int>{1, 0, 1}));
}

TEST(DecomposeTest, TrivialMultiplicityCountsOrbits) {
  const GroupPtr g = symmetric(4);
  const auto table = char_table(g);
  // S4 acting on ordered pairs (i, j), i != j, and on unordered pairs.
  std::vector<std::vector<int>> ordered(24), unordered(24);
  const auto perms = symmetric_permutations(4);
  std::vector<std::pair<int, int>> op, up;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i != j) op.emplace_back(i, j);
      if (i < j) up.emplace_back(i, j);
    }
  for (Element e = 0; e < 24; ++e) {
    const auto& p = perms[e];
    for (auto [i, j] : op)
      ordered[e].push_back(static_cast<int>(
          std::find(op.begin(), op.end(), std::make_pair(p[i], p[j])) - op.begin()));
    for (auto [i, j] : up)
      unordered[e].push_back(static_cast<int>(
          std::find(up.begin(), up.end(), std::make_pair(std::min(p[i], p[j]), std::max(p[i], p[j]))) - up.begin()));
  }
  for (const auto& action : {ordered, unordered}) {
    const Multiplicities m = decompose(permutation_rep(g, action), *table);
    EXPECT_EQ(m.rounded(0), orbit_count(action));
    EXPECT_TRUE(m.dimension_consistent);
  }
}

TEST(DecomposeTest, RandomDirectSumsRoundTrip) {
  std::mt19937_64 rng(7);
  for (const GroupPtr& g : {dihedral(4), symmetric(4), cyclic(4), octahedral_rotations().group}) {
    const auto table = char_table(g);
    std::uniform_int_distribution<int> count(0, 2);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<int> want(table->irreps.size());
      std::optional<ComplexRepresentation> acc;
      for (std::size_t i = 0; i < want.size(); ++i) {
        want[i] = count(rng);
        if (want[i] == 0) continue;
        const ComplexRepresentation block = multiple(want[i], table->realization(i));
        acc = acc ? direct_sum(*acc, block) : block;
      }
      if (!acc) continue;
      // Conjugating by a random orthogonal change of basis must not matter.
      Eigen::MatrixXd a = Eigen::MatrixXd::Random(acc->dim(), acc->dim());
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
      const Eigen::MatrixXcd q = Eigen::MatrixXd(qr.householderQ()).cast<cd>();
      std::vector<Eigen::MatrixXcd> mats;
      for (const auto& m : acc->matrices()) mats.push_back(q * m * q.adjoint());
      const ComplexRepresentation mixed(g, std::move(mats));
      EXPECT_LE(verify_representation(mixed.matrices(), *g), 1e-9);
      const Multiplicities m = decompose(mixed, *table);
      EXPECT_EQ(rounded(m), want) << g->name();
      EXPECT_LE(m.max_rounding_error, 1e-9);
    }
  }
}

TEST(DecomposeTest, IncompatibleGroups) {
  EXPECT_THROW(decompose(named_rep(cyclic(4), NamedRep::regular), *char_table(dihedral(2))),
               IncompatibleError);
  EXPECT_THROW(direct_sum(named_rep(cyclic(4), NamedRep::trivial),
                          named_rep(cyclic(3), NamedRep::trivial)),
               IncompatibleError);
}

TEST(RepresentationTest, PermutationRepRejectsBrokenAction) {
  const GroupPtr g = cyclic(2);
  try {
    permutation_rep(g, {{0, 1, 2}, {1, 2, 0}});
    FAIL() << "expected ActionAxiomError";
  } catch (const ActionAxiomError& e) {
    EXPECT_NE(std::string(e.what()).find("(g, h) = (1, 1)"), std::string::npos);
  }
  EXPECT_THROW(permutation_rep(g, {{0, 1}, {0, 0}}), ActionAxiomError);
}

TEST(RepresentationTest, LatentRep) {
  const GroupPtr g = dihedral(3);
  const RealRepresentation z = latent_rep(g, 14, 2);
  EXPECT_EQ(z.dim(), 14);
  EXPECT_EQ(verify_representation(z.matrices(), *g), 0.0);
  const Multiplicities m = decompose(z, *char_table(g));
  EXPECT_EQ(rounded(m), (std::vector<int>{4, 2, 4}));
  try {
    latent_rep(g, 10, 2);
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("12"), std::string::npos);
    EXPECT_NE(what.find("10"), std::string::npos);
  }
  const RealRepresentation ch = channelwise_latent_rep(g, 3, 6, 1);
  EXPECT_EQ(ch.dim(), 18);
  EXPECT_EQ(rounded(decompose(ch, *char_table(g))), (std::vector<int>{3, 3, 6}));
}

TEST(RepresentationTest, PromoteChecksTolerance) {
  const GroupPtr g = cyclic(2);
  std::vector<Eigen::MatrixXd> good = {Eigen::MatrixXd::Identity(1, 1),
                                       Eigen::MatrixXd::Constant(1, 1, -1.001)};
  EXPECT_NO_THROW(promote<double>(g, good));
  std::vector<Eigen::MatrixXd> bad = {Eigen::MatrixXd::Identity(1, 1),
                                      Eigen::MatrixXd::Constant(1, 1, 0.5)};
  EXPECT_THROW(promote<double>(g, bad), NumericalError);
  std::vector<Eigen::MatrixXd> ragged = {Eigen::MatrixXd::Identity(1, 1),
                                         Eigen::MatrixXd::Identity(2, 2)};
  EXPECT_THROW(RealRepresentation(g, ragged), ShapeError);
}

TEST(RepresentationTest, HelmertBasisIsOrthonormalZeroSum) {
  for (int n = 2; n <= 6; ++n) {
    const Eigen::MatrixXd q = helmert_basis(n);
    EXPECT_LE((q.transpose() * q - Eigen::MatrixXd::Identity(n - 1, n - 1)).norm(), 1e-14);
    EXPECT_LE(q.colwise().sum().cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(MatrixIoTest, RoundTripRealAndComplex) {
  const RealRepresentation s = named_rep(symmetric(3), NamedRep::standard);
  std::ostringstream out;
  write_matrices(out, s.matrices());
  const MatrixFile back = parse_matrices(out.str());
  EXPECT_FALSE(back.complex);
  ASSERT_EQ(back.matrices.size(), 6u);
  const auto real = back.real_matrices();
  for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(real[k], s[static_cast<Element>(k)]);

  const ComplexRepresentation c = char_table(cyclic(4))->realization(1);
  std::ostringstream cout;
  write_matrices(cout, c.matrices());
  const MatrixFile cback = parse_matrices(cout.str());
  EXPECT_TRUE(cback.complex);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(cback.matrices[k], c[static_cast<Element>(k)]);
}

TEST(MatrixIoTest, MalformedInputReportsOffset) {
  try {
    parse_matrices("2\n1 0\n0 x\n");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_GT(e.offset(), 0u);
  }
}

}  // namespace
}  // namespace grlt
