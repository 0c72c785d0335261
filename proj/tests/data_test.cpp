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

#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "grlt/character_table.hpp"
#include "grlt/data.hpp"
#include "grlt/errors.hpp"
#include "grlt/octahedral.hpp"

namespace grlt {
namespace {

Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

// apply(g, apply(h, x)) == apply(gh, x) for every pair, and the identity fixes x.
void expect_action_laws(const ActionSpec& a, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::VectorXd x = random_vector(rng, a.length());
  const Group& g = a.group();
  EXPECT_EQ(a.apply(0, x), x) << action_kind_name(a.kind());
  for (Element p = 0; p < g.order(); ++p)
    for (Element q = 0; q < g.order(); ++q)
      ASSERT_EQ(a.apply(p, a.apply(q, x)), a.apply(g.mul(p, q), x))
          << action_kind_name(a.kind()) << " (g, h) = (" << p << ", " << q << ")";
}

TEST(PrimitiveTest, Rot90Example) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 3, 4;
  Eigen::MatrixXd expected(2, 2);
  expected << 2, 4, 1, 3;
  EXPECT_EQ(rot90_grid(m, 1), expected);
  EXPECT_EQ(rot90_grid(m, 4), m);
  EXPECT_EQ(rot90_grid(m, -1), rot90_grid(m, 3));
  EXPECT_THROW(rot90_grid(Eigen::MatrixXd::Zero(2, 3), 1), ShapeError);
}

TEST(PrimitiveTest, FlipExamples) {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  Eigen::MatrixXd h(2, 3), v(2, 3);
  h << 4, 5, 6, 1, 2, 3;
  v << 3, 2, 1, 6, 5, 4;
  EXPECT_EQ(flip_grid(m, FlipAxis::horizontal), h);
  EXPECT_EQ(flip_grid(m, FlipAxis::vertical), v);
}

TEST(PrimitiveTest, FlattenRoundTrip) {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  Eigen::VectorXd f(6);
  f << 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(flatten(m), f);
  EXPECT_EQ(unflatten(f, 2, 3), m);
  EXPECT_THROW(unflatten(f, 4, 2), ShapeError);
}

TEST(PrimitiveTest, VectorFieldRotationReorientsVectors) {
  // A constant field pointing along +x turns into one pointing along +y.
  const std::vector<Eigen::MatrixXd> east = {Eigen::MatrixXd::Ones(3, 3),
                                             Eigen::MatrixXd::Zero(3, 3)};
  const auto north = vector_field_rot90(east, 1);
  EXPECT_EQ(north[0], Eigen::MatrixXd::Zero(3, 3));
  EXPECT_EQ(north[1], Eigen::MatrixXd::Ones(3, 3));

  std::mt19937_64 rng(1);
  const std::vector<Eigen::MatrixXd> f = {unflatten(random_vector(rng, 16), 4, 4),
                                          unflatten(random_vector(rng, 16), 4, 4)};
  const auto r4 = vector_field_rot90(f, 4);
  EXPECT_EQ(r4[0], f[0]);
  EXPECT_EQ(r4[1], f[1]);
  // Rotating the grid without turning the vectors is a different map.
  const auto r1 = vector_field_rot90(f, 1);
  EXPECT_NE(r1[0], rot90_grid(f[0], 1));
  EXPECT_THROW(vector_field_rot90({f[0]}, 1), ShapeError);
}

TEST(PrimitiveTest, VoxelRotationsAreDistinct) {
  std::mt19937_64 rng(2);
  const Eigen::VectorXd vol = random_vector(rng, 64);
  std::set<std::vector<double>> seen;
  for (const RotationElement& r : octahedral_rotations().rotations) {
    const Eigen::VectorXd out = voxel_rotation(vol, 4, r.matrix);
    seen.insert(std::vector<double>(out.begin(), out.end()));
  }
  EXPECT_EQ(seen.size(), 24u);
  EXPECT_THROW(voxel_rotation(vol, 3, Eigen::Matrix3i::Identity()), ShapeError);
}

TEST(PrimitiveTest, BodyDiagonalRotationHasOrderThree) {
  const Eigen::Matrix3i r = axis_angle_matrix(Eigen::Vector3i(1, 1, 1), 2, 3);
  std::mt19937_64 rng(3);
  const Eigen::VectorXd vol = random_vector(rng, 27);
  const Eigen::VectorXd once = voxel_rotation(vol, 3, r);
  EXPECT_NE(once, vol);
  EXPECT_NE(voxel_rotation(once, 3, r), vol);
  EXPECT_EQ(voxel_rotation(voxel_rotation(once, 3, r), 3, r), vol);
}

TEST(PrimitiveTest, VoxelMovesPointToRotatedPosition) {
  // A single hot voxel at x = 0 lands at y = 0 under the quarter turn about z.
  const Eigen::Matrix3i rz = axis_angle_matrix(Eigen::Vector3i(0, 0, 1), 1, 2);
  Eigen::VectorXd vol = Eigen::VectorXd::Zero(27);
  vol((0 * 3 + 1) * 3 + 1) = 1.0;
  const Eigen::Vector3i p = rz * Eigen::Vector3i(-2, 0, 0);
  const Eigen::VectorXd out = voxel_rotation(vol, 3, rz);
  const int x = (p(0) + 2) / 2, y = (p(1) + 2) / 2, z = (p(2) + 2) / 2;
  EXPECT_EQ(out((x * 3 + y) * 3 + z), 1.0);
  EXPECT_EQ(out.sum(), 1.0);
}

TEST(ActionSpecTest, LawsHoldExhaustively) {
  expect_action_laws(ActionSpec::rot90(5), 10);
  expect_action_laws(ActionSpec::flip(3, 4), 11);
  expect_action_laws(ActionSpec::flip(3, 4, FlipAxis::vertical), 12);
  expect_action_laws(ActionSpec::voxel(3), 13);
  expect_action_laws(ActionSpec::vector_field(4), 14);
  expect_action_laws(ActionSpec::block_permutation(dihedral(3), 4), 15);
  expect_action_laws(ActionSpec::block_permutation(dihedral(1), 3), 16);
  expect_action_laws(ActionSpec::trivial(cyclic(4), 3), 17);
}

TEST(ActionSpecTest, AgreesWithPrimitives) {
  std::mt19937_64 rng(20);
  const Eigen::VectorXd x = random_vector(rng, 36);
  const ActionSpec a = ActionSpec::rot90(6);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(a.apply(k, x), flatten(rot90_grid(unflatten(x, 6, 6), k)));
  const Eigen::VectorXd v = random_vector(rng, 27);
  const ActionSpec vox = ActionSpec::voxel(3);
  const OctahedralGroup& o = octahedral_rotations();
  for (Element g = 0; g < 24; ++g) EXPECT_EQ(vox.apply(g, v), voxel_rotation(v, 3, o.rotations[g].matrix));
  Eigen::MatrixXd batch(2, 36);
  batch.row(0) = x.transpose();
  batch.row(1) = (2.0 * x).transpose();
  const Eigen::MatrixXd rows = a.apply_rows(1, batch);
  EXPECT_EQ(Eigen::VectorXd(rows.row(1).transpose()), a.apply(1, 2.0 * x));
  EXPECT_THROW(a.apply(1, Eigen::VectorXd::Zero(5)), ShapeError);
}

TEST(ActionSpecTest, RepresentationDecomposesLikeThePermutationModule) {
  // Block permutation by D3 with block length 2 is two copies of the regular
  // representation: trivial, sign and standard appear 2, 2 and 4 times.
  const GroupPtr g = dihedral(3);
  const RealRepresentation rep = ActionSpec::block_permutation(g, 2).representation();
  EXPECT_LE(verify_representation(rep.matrices(), rep.group()), 1e-12);
  const Multiplicities m = decompose(rep, *char_table(g));
  EXPECT_EQ(m.rounded, Eigen::Vector3i(2, 2, 4));
  // The vector-field representation has signed entries and is still orthogonal.
  const RealRepresentation vf = ActionSpec::vector_field(2).representation();
  for (Element e = 0; e < 4; ++e)
    EXPECT_EQ(vf[e] * vf[e].transpose(), Eigen::MatrixXd::Identity(8, 8));
}

TEST(DatasetTest, DeterministicInSeed) {
  for (const char* kind : {"c4_autoencode", "d1_pairswap", "d3_blocks", "d3_blocks_classify",
                           "s4_voxels"}) {
    const DatasetSpec spec{kind, 20, 4};
    const Dataset a = synth_dataset(spec, 7), b = synth_dataset(spec, 7), c = synth_dataset(spec, 8);
    EXPECT_EQ(a.inputs, b.inputs) << kind;
    EXPECT_EQ(a.targets, b.targets) << kind;
    EXPECT_NE(a.inputs, c.inputs) << kind;
    EXPECT_EQ(a.train_count, 16);
    EXPECT_EQ(a.test_inputs().rows(), 4);
    EXPECT_GE(a.inputs.minCoeff(), 0.0);
    EXPECT_LE(a.inputs.maxCoeff(), 1.0);
    EXPECT_EQ(a.inputs.cols(), a.input_action.length());
    EXPECT_EQ(a.targets.cols(), a.target_action.length());
  }
  EXPECT_THROW(synth_dataset({"mnist", 10, 4}, 1), ConfigError);
  EXPECT_THROW(synth_dataset({"c4_autoencode", 0, 4}, 1), ConfigError);
}

TEST(DatasetTest, OrbitsHaveFullSize) {
  // Generic smooth images have trivial stabilizers, so every orbit has |G| points.
  const Dataset ds = synth_dataset({"c4_autoencode", 10, 6}, 3);
  for (Eigen::Index i = 0; i < ds.size(); ++i) {
    std::set<std::vector<double>> orbit;
    for (Element g = 0; g < 4; ++g) {
      const Eigen::VectorXd y = ds.input_action.apply(g, ds.inputs.row(i).transpose());
      orbit.insert(std::vector<double>(y.begin(), y.end()));
    }
    EXPECT_EQ(orbit.size(), 4u);
  }
}

TEST(DatasetTest, PairSwapIsAnInvolution) {
  const Dataset ds = synth_dataset({"d1_pairswap", 5, 6}, 4);
  const Eigen::VectorXd x = ds.inputs.row(0).transpose();
  const Eigen::VectorXd s = ds.input_action.apply(1, x);
  EXPECT_EQ(s.head(6), x.tail(6));
  EXPECT_EQ(s.tail(6), x.head(6));
  EXPECT_EQ(ds.input_action.apply(1, s), x);
}

TEST(DatasetTest, ClassificationLabelsAreInvariant) {
  const Dataset ds = synth_dataset({"d3_blocks_classify", 50, 5}, 5);
  EXPECT_EQ(ds.task, TaskKind::cross_entropy_classifier);
  EXPECT_EQ(ds.targets.rowwise().sum(), Eigen::VectorXd::Ones(50));
  for (Element g = 0; g < 6; ++g) {
    const Eigen::MatrixXd gx = ds.input_action.apply_rows(g, ds.inputs);
    for (Eigen::Index i = 0; i < 50; ++i) {
      Eigen::Vector3d profile = Eigen::Vector3d::Zero();
      for (int b = 0; b < 6; ++b) profile += gx.row(i).segment(b * 5, 3).transpose();
      Eigen::Index cls = 0;
      profile.maxCoeff(&cls);
      EXPECT_EQ(ds.targets(i, cls), 1.0);
    }
  }
}

TEST(DatasetTest, SmoothPatternIsNormalized) {
  std::mt19937_64 rng(6);
  const Eigen::VectorXd p = smooth_pattern({5, 7}, rng);
  EXPECT_EQ(p.size(), 35);
  EXPECT_DOUBLE_EQ(p.minCoeff(), 0.0);
  EXPECT_DOUBLE_EQ(p.maxCoeff(), 1.0);
  const Eigen::VectorXd flat = smooth_pattern({1}, rng);
  EXPECT_EQ(flat(0), 0.5);
}

TEST(AugmentTest, ElementFrequenciesAreUniform) {
  const Dataset ds = synth_dataset({"d3_blocks", 10, 3}, 8);
  std::mt19937_64 rng(9);
  constexpr int kDraws = 10000;
  std::vector<int> counts(6, 0);
  for (int i = 0; i < kDraws; ++i) {
    const AugmentedSample s = augment_sample(ds, i % ds.size(), rng);
    ++counts[s.g];
    ASSERT_EQ(s.gx, ds.input_action.apply(s.g, s.x));
    if (s.g == 0) ASSERT_EQ(s.gx, s.x);
  }
  const double p = 1.0 / 6.0;
  const double sigma = std::sqrt(kDraws * p * (1 - p));
  for (int c : counts) EXPECT_LE(std::abs(c - kDraws * p), 4 * sigma);
  EXPECT_THROW(augment_sample(ds, 10, rng), IndexError);
}

TEST(AugmentTest, BatchSharesOneElement) {
  const Dataset ds = synth_dataset({"c4_autoencode", 20, 4}, 10);
  std::mt19937_64 rng(11);
  const ActedBatch b = sample_batch(ds, ds.train_count, 8, rng);
  EXPECT_EQ(b.x.rows(), 8);
  EXPECT_EQ(b.gx, ds.input_action.apply_rows(b.g, b.x));
  EXPECT_EQ(b.gy, ds.target_action.apply_rows(b.g, b.y));
  EXPECT_THROW(sample_batch(ds, 21, 8, rng), IndexError);
}

std::string idx_bytes(std::uint32_t magic, const std::vector<std::uint32_t>& dims,
                      const std::vector<unsigned char>& payload) {
  std::string out;
  auto put = [&out](std::uint32_t v) {
    for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<char>((v >> s) & 0xFF));
  };
  put(magic);
  for (std::uint32_t d : dims) put(d);
  out.append(payload.begin(), payload.end());
  return out;
}

TEST(IdxTest, ParsesFixtures) {
  const IdxTensor labels = parse_idx(idx_bytes(0x801, {3}, {7, 0, 255}), kIdxLabelMagic);
  EXPECT_EQ(labels.dims, (std::vector<int>{3}));
  EXPECT_EQ(labels.values, Eigen::Vector3d(7, 0, 255));
  const IdxTensor images = parse_idx(idx_bytes(0x803, {2, 1, 2}, {0, 255, 51, 102}));
  EXPECT_EQ(images.dims, (std::vector<int>{2, 1, 2}));
  EXPECT_DOUBLE_EQ(images.values(1), 1.0);
  EXPECT_DOUBLE_EQ(images.values(2), 0.2);
}

TEST(IdxTest, RejectsBadFiles) {
  const std::string good = idx_bytes(0x803, {2, 2, 2}, {1, 2, 3, 4, 5, 6, 7, 8});
  try {
    parse_idx(good.substr(0, good.size() - 2));
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), good.size() - 2);
  }
  EXPECT_THROW(parse_idx(good.substr(0, 6)), FormatError);
  try {
    parse_idx(good, kIdxLabelMagic);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("0x00000803"), std::string::npos) << what;
    EXPECT_NE(what.find("0x00000801"), std::string::npos) << what;
  }
  EXPECT_THROW(parse_idx(idx_bytes(0x802, {1}, {0})), FormatError);
  EXPECT_THROW(load_idx("/nonexistent/grlt.idx"), FormatError);
}

TEST(TensorTextTest, RoundTrip) {
  std::mt19937_64 rng(12);
  const Eigen::MatrixXd m = unflatten(random_vector(rng, 12), 3, 4);
  std::stringstream ss;
  write_tensor_text(ss, m);
  EXPECT_EQ(read_tensor_text(ss), m);
  std::istringstream bad("tensor 2 2\n1 2 3\n");
  EXPECT_THROW(read_tensor_text(bad), FormatError);
  std::istringstream header("matrix 1 1\n0\n");
  EXPECT_THROW(read_tensor_text(header), FormatError);
}

}  // namespace
}  // namespace grlt
