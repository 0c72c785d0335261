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

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "grlt/group.hpp"
#include "grlt/losses.hpp"
#include "grlt/representation.hpp"

namespace grlt {

// Tensor primitives. Grids are Eigen matrices indexed (row, col).

/// Counterclockwise quarter turns of a square grid: out(i, j) = in(j, w-1-i)
/// for k = 1; k is taken mod 4. Throws ShapeError on a non-square grid.
Eigen::MatrixXd rot90_grid(const Eigen::MatrixXd& image, int k);

enum class FlipAxis { horizontal, vertical };

/// horizontal reverses the row order; vertical reverses the columns.
Eigen::MatrixXd flip_grid(const Eigen::MatrixXd& image, FlipAxis axis);

/// A side^3 volume flattened as ((x * side) + y) * side + z. The voxel at p
/// moves to R p, in coordinates centered on the cube.
Eigen::VectorXd voxel_rotation(const Eigen::VectorXd& volume, int side, const Eigen::Matrix3i& rot);

/// Channel 0 is the x (column) component and channel 1 the y component,
/// with y pointing toward row 0. Each quarter turn rotates the grid and maps
/// (vx, vy) to (-vy, vx). Throws ShapeError unless there are two square channels.
std::vector<Eigen::MatrixXd> vector_field_rot90(const std::vector<Eigen::MatrixXd>& field, int k);

/// Row-major flattening used by every dataset.
Eigen::VectorXd flatten(const Eigen::MatrixXd& image);
Eigen::MatrixXd unflatten(const Eigen::Ref<const Eigen::VectorXd>& flat, int rows, int cols);

enum class ActionKind {
  rot90_grid,
  flip_grid,
  voxel_rotation,
  vector_field_rot90,
  block_permutation,
  trivial
};

const char* action_kind_name(ActionKind kind);

/// A group action on flat vectors by signed coordinate permutations:
/// apply(g, x)[i] = sign_g[i] * x[source_g[i]].
class ActionSpec {
 public:
  /// C4 acting on side x side images.
  static ActionSpec rot90(int side);
  /// D1 acting on rows x cols images.
  static ActionSpec flip(int rows, int cols, FlipAxis axis = FlipAxis::horizontal);
  /// The octahedral rotation group acting on side^3 volumes.
  static ActionSpec voxel(int side);
  /// C4 acting on 2 x side x side vector fields.
  static ActionSpec vector_field(int side);
  /// Element g moves block h to position g h; |G| blocks of block_dim entries.
  static ActionSpec block_permutation(GroupPtr group, int block_dim);
  static ActionSpec trivial(GroupPtr group, int length);

  ActionKind kind() const { return kind_; }
  const GroupPtr& group_ptr() const { return group_; }
  const Group& group() const { return *group_; }
  int length() const { return length_; }

  Eigen::VectorXd apply(Element g, const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Applies g to every row of a batch.
  Eigen::MatrixXd apply_rows(Element g, const Eigen::MatrixXd& batch) const;
  /// The signed permutation matrices as a representation.
  RealRepresentation representation() const;

  const std::vector<int>& source(Element g) const { return source_.at(g); }
  const std::vector<signed char>& sign(Element g) const { return sign_.at(g); }

 private:
  ActionSpec(ActionKind kind, GroupPtr group, int length);
  // Derives the signed permutation of every element from `op` on an index-coded vector.
  template <typename Op>
  void build(Op op);

  ActionKind kind_;
  GroupPtr group_;
  int length_;
  std::vector<std::vector<int>> source_;
  std::vector<std::vector<signed char>> sign_;
};

struct DatasetSpec {
  /// c4_autoencode, d1_pairswap, d3_blocks, d3_blocks_classify or s4_voxels.
  std::string kind = "c4_autoencode";
  int n = 1000;
  /// Grid side (c4_autoencode, s4_voxels), pattern length (d1_pairswap) or
  /// block length (d3_blocks).
  int size = 8;
};

struct Dataset {
  DatasetSpec spec;
  TaskKind task = TaskKind::mse_autoencoder;
  /// One example per row.
  Eigen::MatrixXd inputs, targets;
  ActionSpec input_action, target_action;
  Eigen::Index train_count = 0;

  Eigen::Index size() const { return inputs.rows(); }
  Eigen::MatrixXd train_inputs() const { return inputs.topRows(train_count); }
  Eigen::MatrixXd train_targets() const { return targets.topRows(train_count); }
  Eigen::MatrixXd test_inputs() const { return inputs.bottomRows(size() - train_count); }
  Eigen::MatrixXd test_targets() const { return targets.bottomRows(size() - train_count); }
};

/// Deterministic in (spec, seed). Inputs are smooth patterns in [0, 1];
/// the first 80% of the rows form the training split.
Dataset synth_dataset(const DatasetSpec& spec, std::uint64_t seed);

/// Sum of 4 random low-frequency separable cosine modes over a grid with
/// the given axis lengths, min-max normalized to [0, 1]. Row-major.
Eigen::VectorXd smooth_pattern(const std::vector<int>& shape, std::mt19937_64& rng);

struct AugmentedSample {
  Eigen::VectorXd x, y;
  Element g = 0;
  Eigen::VectorXd gx, gy;
};

/// Draws g uniformly over the whole group (identity included).
AugmentedSample augment_sample(const Dataset& ds, Eigen::Index index, std::mt19937_64& rng);

/// Batch of rows drawn uniformly (with replacement) from the first
/// `pool` rows, plus one group element shared by the whole batch.
ActedBatch sample_batch(const Dataset& ds, Eigen::Index pool, int batch_size, std::mt19937_64& rng);

struct IdxTensor {
  std::uint32_t magic = 0;
  std::vector<int> dims;
  /// Image files are scaled to [0, 1]; label files keep raw byte values.
  Eigen::VectorXd values;
};

inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;
inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;

/// Parses big-endian IDX content. When `expected` is nonzero the magic must
/// match it. Throws FormatError with a byte offset.
IdxTensor parse_idx(const std::string& bytes, std::uint32_t expected = 0);
IdxTensor load_idx(const std::string& path, std::uint32_t expected = 0);

/// `tensor <rows> <cols>` followed by one whitespace-separated row per line.
void write_tensor_text(std::ostream& out, const Eigen::MatrixXd& rows);
Eigen::MatrixXd read_tensor_text(std::istream& in);

}  // namespace grlt
