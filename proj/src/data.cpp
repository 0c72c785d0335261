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

#include "grlt/data.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "grlt/atomic_file.hpp"
#include "grlt/errors.hpp"
#include "grlt/octahedral.hpp"

namespace grlt {

namespace {

std::string hex32(std::uint32_t v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "0x%08X", v);
  return buf;
}

}  // namespace

Eigen::MatrixXd rot90_grid(const Eigen::MatrixXd& image, int k) {
  if (image.rows() != image.cols())
    throw ShapeError("rot90_grid needs a square grid, got " + std::to_string(image.rows()) + "x" +
                     std::to_string(image.cols()));
  const Eigen::Index w = image.cols();
  Eigen::MatrixXd cur = image;
  for (int step = 0; step < ((k % 4) + 4) % 4; ++step) {
    Eigen::MatrixXd next(w, w);
    for (Eigen::Index i = 0; i < w; ++i)
      for (Eigen::Index j = 0; j < w; ++j) next(i, j) = cur(j, w - 1 - i);
    cur = std::move(next);
  }
  return cur;
}

Eigen::MatrixXd flip_grid(const Eigen::MatrixXd& image, FlipAxis axis) {
  return axis == FlipAxis::horizontal ? Eigen::MatrixXd(image.colwise().reverse())
                                      : Eigen::MatrixXd(image.rowwise().reverse());
}

Eigen::VectorXd voxel_rotation(const Eigen::VectorXd& volume, int side, const Eigen::Matrix3i& rot) {
  if (side < 1 || volume.size() != static_cast<Eigen::Index>(side) * side * side)
    throw ShapeError("voxel_rotation needs a cubic volume of side " + std::to_string(side) +
                     ", got " + std::to_string(volume.size()) + " voxels");
  // Doubled centered coordinates 2i - (side - 1) stay integral.
  auto coord = [side](int i) { return 2 * i - (side - 1); };
  auto index = [side](int c) { return (c + side - 1) / 2; };
  const Eigen::Matrix3i inv = rot.transpose();
  Eigen::VectorXd out(volume.size());
  for (int x = 0; x < side; ++x)
    for (int y = 0; y < side; ++y)
      for (int z = 0; z < side; ++z) {
        const Eigen::Vector3i src = inv * Eigen::Vector3i(coord(x), coord(y), coord(z));
        out((x * side + y) * side + z) =
            volume((index(src(0)) * side + index(src(1))) * side + index(src(2)));
      }
  return out;
}

std::vector<Eigen::MatrixXd> vector_field_rot90(const std::vector<Eigen::MatrixXd>& field, int k) {
  if (field.size() != 2)
    throw ShapeError("vector field needs 2 channels, got " + std::to_string(field.size()));
  if (field[0].rows() != field[1].rows() || field[0].cols() != field[1].cols())
    throw ShapeError("vector field channels differ in shape");
  std::vector<Eigen::MatrixXd> cur = field;
  for (int step = 0; step < ((k % 4) + 4) % 4; ++step) {
    Eigen::MatrixXd vx = rot90_grid(cur[0], 1), vy = rot90_grid(cur[1], 1);
    cur[0] = -vy;
    cur[1] = std::move(vx);
  }
  return cur;
}

Eigen::VectorXd flatten(const Eigen::MatrixXd& image) {
  Eigen::VectorXd out(image.size());
  for (Eigen::Index i = 0; i < image.rows(); ++i)
    for (Eigen::Index j = 0; j < image.cols(); ++j) out(i * image.cols() + j) = image(i, j);
  return out;
}

Eigen::MatrixXd unflatten(const Eigen::Ref<const Eigen::VectorXd>& flat, int rows, int cols) {
  if (flat.size() != static_cast<Eigen::Index>(rows) * cols)
    throw ShapeError("cannot view " + std::to_string(flat.size()) + " values as " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  Eigen::MatrixXd out(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out(i, j) = flat(static_cast<Eigen::Index>(i) * cols + j);
  return out;
}

const char* action_kind_name(ActionKind kind) {
  switch (kind) {
    case ActionKind::rot90_grid: return "rot90_grid";
    case ActionKind::flip_grid: return "flip_grid";
    case ActionKind::voxel_rotation: return "voxel_rotation";
    case ActionKind::vector_field_rot90: return "vector_field_rot90";
    case ActionKind::block_permutation: return "block_permutation";
    case ActionKind::trivial: return "trivial";
  }
  return "unknown";
}

ActionSpec::ActionSpec(ActionKind kind, GroupPtr group, int length)
    : kind_(kind), group_(std::move(group)), length_(length) {
  if (length_ < 1) throw ShapeError("action needs a positive vector length");
}

template <typename Op>
void ActionSpec::build(Op op) {
  Eigen::VectorXd code(length_);
  for (int i = 0; i < length_; ++i) code(i) = i + 1;
  for (Element g = 0; g < group_->order(); ++g) {
    const Eigen::VectorXd moved = op(g, code);
    std::vector<int> src(length_);
    std::vector<signed char> sgn(length_);
    for (int i = 0; i < length_; ++i) {
      const double v = moved(i);
      src[i] = static_cast<int>(std::abs(v)) - 1;
      sgn[i] = v < 0 ? -1 : 1;
    }
    source_.push_back(std::move(src));
    sign_.push_back(std::move(sgn));
  }
}

ActionSpec ActionSpec::rot90(int side) {
  ActionSpec a(ActionKind::rot90_grid, cyclic(4), side * side);
  a.build([side](Element g, const Eigen::VectorXd& x) {
    return flatten(rot90_grid(unflatten(x, side, side), g));
  });
  return a;
}

ActionSpec ActionSpec::flip(int rows, int cols, FlipAxis axis) {
  ActionSpec a(ActionKind::flip_grid, dihedral(1), rows * cols);
  a.build([rows, cols, axis](Element g, const Eigen::VectorXd& x) {
    const Eigen::MatrixXd img = unflatten(x, rows, cols);
    return flatten(g == 0 ? img : flip_grid(img, axis));
  });
  return a;
}

ActionSpec ActionSpec::voxel(int side) {
  const OctahedralGroup& o = octahedral_rotations();
  ActionSpec a(ActionKind::voxel_rotation, o.group, side * side * side);
  a.build([side, &o](Element g, const Eigen::VectorXd& x) {
    return voxel_rotation(x, side, o.rotations[g].matrix);
  });
  return a;
}

ActionSpec ActionSpec::vector_field(int side) {
  const int plane = side * side;
  ActionSpec a(ActionKind::vector_field_rot90, cyclic(4), 2 * plane);
  a.build([side, plane](Element g, const Eigen::VectorXd& x) {
    const std::vector<Eigen::MatrixXd> f = {unflatten(x.head(plane), side, side),
                                            unflatten(x.tail(plane), side, side)};
    const auto r = vector_field_rot90(f, g);
    Eigen::VectorXd out(2 * plane);
    out << flatten(r[0]), flatten(r[1]);
    return out;
  });
  return a;
}

ActionSpec ActionSpec::block_permutation(GroupPtr group, int block_dim) {
  if (block_dim < 1) throw ShapeError("block dimension must be positive");
  const int order = group->order();
  ActionSpec a(ActionKind::block_permutation, group, order * block_dim);
  const Group& gr = *a.group_;
  a.build([&gr, order, block_dim](Element g, const Eigen::VectorXd& x) {
    Eigen::VectorXd out(x.size());
    for (Element h = 0; h < order; ++h)
      out.segment(static_cast<Eigen::Index>(gr.mul(g, h)) * block_dim, block_dim) =
          x.segment(static_cast<Eigen::Index>(h) * block_dim, block_dim);
    return out;
  });
  return a;
}

ActionSpec ActionSpec::trivial(GroupPtr group, int length) {
  ActionSpec a(ActionKind::trivial, std::move(group), length);
  a.build([](Element, const Eigen::VectorXd& x) { return x; });
  return a;
}

Eigen::VectorXd ActionSpec::apply(Element g, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != length_)
    throw ShapeError("action expects vectors of length " + std::to_string(length_) + ", got " +
                     std::to_string(x.size()));
  const auto& src = source_.at(g);
  const auto& sgn = sign_[g];
  Eigen::VectorXd out(length_);
  for (int i = 0; i < length_; ++i) out(i) = sgn[i] < 0 ? -x(src[i]) : x(src[i]);
  return out;
}

Eigen::MatrixXd ActionSpec::apply_rows(Element g, const Eigen::MatrixXd& batch) const {
  if (batch.cols() != length_)
    throw ShapeError("action expects rows of length " + std::to_string(length_) + ", got " +
                     std::to_string(batch.cols()));
  const auto& src = source_.at(g);
  const auto& sgn = sign_[g];
  Eigen::MatrixXd out(batch.rows(), length_);
  for (int i = 0; i < length_; ++i) {
    if (sgn[i] < 0)
      out.col(i) = -batch.col(src[i]);
    else
      out.col(i) = batch.col(src[i]);
  }
  return out;
}

RealRepresentation ActionSpec::representation() const {
  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(group_->order());
  for (Element g = 0; g < group_->order(); ++g) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(length_, length_);
    for (int i = 0; i < length_; ++i) m(i, source_[g][i]) = sign_[g][i];
    mats.push_back(std::move(m));
  }
  return RealRepresentation(group_, std::move(mats));
}

Eigen::VectorXd smooth_pattern(const std::vector<int>& shape, std::mt19937_64& rng) {
  constexpr int kModes = 4;
  constexpr int kMaxFrequency = 2;
  std::uniform_int_distribution<int> freq(0, kMaxFrequency);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> amp(0.0, 1.0);
  Eigen::Index total = 1;
  for (int s : shape) total *= s;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(total);
  for (int m = 0; m < kModes; ++m) {
    const double a = amp(rng);
    std::vector<Eigen::VectorXd> factors;
    for (int s : shape) {
      const int f = freq(rng);
      const double p = phase(rng);
      Eigen::VectorXd v(s);
      for (int i = 0; i < s; ++i) v(i) = std::cos(2.0 * std::numbers::pi * f * i / s + p);
      factors.push_back(std::move(v));
    }
    for (Eigen::Index idx = 0; idx < total; ++idx) {
      Eigen::Index rem = idx;
      double prod = a;
      for (std::size_t ax = shape.size(); ax-- > 0;) {
        prod *= factors[ax](rem % shape[ax]);
        rem /= shape[ax];
      }
      out(idx) += prod;
    }
  }
  const double lo = out.minCoeff(), hi = out.maxCoeff();
  if (hi - lo < 1e-12) return Eigen::VectorXd::Constant(total, 0.5);
  return (out.array() - lo) / (hi - lo);
}

Dataset synth_dataset(const DatasetSpec& spec, std::uint64_t seed) {
  if (spec.n < 1) throw ConfigError("dataset needs at least one example");
  if (spec.size < 1) throw ConfigError("dataset size parameter must be positive");
  std::mt19937_64 rng(seed);
  const int n = spec.n, s = spec.size;
  auto fill = [&](int length, const auto& make) {
    Eigen::MatrixXd m(n, length);
    for (int i = 0; i < n; ++i) m.row(i) = make().transpose();
    return m;
  };
  const Eigen::Index train = (static_cast<Eigen::Index>(n) * 4) / 5;

  if (spec.kind == "c4_autoencode") {
    ActionSpec act = ActionSpec::rot90(s);
    Eigen::MatrixXd x = fill(s * s, [&] { return smooth_pattern({s, s}, rng); });
    return Dataset{spec, TaskKind::mse_autoencoder, x, x, act, act, train};
  }
  if (spec.kind == "d1_pairswap") {
    ActionSpec act = ActionSpec::block_permutation(dihedral(1), s);
    Eigen::MatrixXd x = fill(2 * s, [&] {
      Eigen::VectorXd v(2 * s);
      v << smooth_pattern({s}, rng), smooth_pattern({s}, rng);
      return v;
    });
    return Dataset{spec, TaskKind::mse_autoencoder, x, x, act, act, train};
  }
  if (spec.kind == "d3_blocks" || spec.kind == "d3_blocks_classify") {
    const GroupPtr g = dihedral(3);
    ActionSpec act = ActionSpec::block_permutation(g, s);
    Eigen::MatrixXd x = fill(6 * s, [&] {
      Eigen::VectorXd v(6 * s);
      for (int b = 0; b < 6; ++b) v.segment(b * s, s) = smooth_pattern({s}, rng);
      return v;
    });
    if (spec.kind == "d3_blocks") return Dataset{spec, TaskKind::mse_autoencoder, x, x, act, act, train};
    if (s < 3) throw ConfigError("d3_blocks_classify needs blocks of length at least 3");
    // The block-summed profile is invariant under block permutations.
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(n, 3);
    for (int i = 0; i < n; ++i) {
      Eigen::Vector3d profile = Eigen::Vector3d::Zero();
      for (int b = 0; b < 6; ++b) profile += x.row(i).segment(b * s, 3).transpose();
      Eigen::Index cls = 0;
      profile.maxCoeff(&cls);
      y(i, cls) = 1.0;
    }
    return Dataset{spec, TaskKind::cross_entropy_classifier, x, y, act,
                   ActionSpec::trivial(g, 3), train};
  }
  if (spec.kind == "s4_voxels") {
    ActionSpec act = ActionSpec::voxel(s);
    Eigen::MatrixXd x = fill(s * s * s, [&] { return smooth_pattern({s, s, s}, rng); });
    return Dataset{spec, TaskKind::mse_autoencoder, x, x, act, act, train};
  }
  throw ConfigError("unknown dataset kind '" + spec.kind +
                    "' (expected c4_autoencode, d1_pairswap, d3_blocks, d3_blocks_classify or "
                    "s4_voxels)");
}

AugmentedSample augment_sample(const Dataset& ds, Eigen::Index index, std::mt19937_64& rng) {
  if (index < 0 || index >= ds.size())
    throw IndexError("sample index " + std::to_string(index) + " outside dataset of size " +
                     std::to_string(ds.size()));
  std::uniform_int_distribution<int> pick(0, ds.input_action.group().order() - 1);
  AugmentedSample s;
  s.x = ds.inputs.row(index).transpose();
  s.y = ds.targets.row(index).transpose();
  s.g = pick(rng);
  s.gx = ds.input_action.apply(s.g, s.x);
  s.gy = ds.target_action.apply(s.g, s.y);
  return s;
}

ActedBatch sample_batch(const Dataset& ds, Eigen::Index pool, int batch_size, std::mt19937_64& rng) {
  if (pool < 1 || pool > ds.size()) throw IndexError("sampling pool outside the dataset");
  if (batch_size < 1) throw ConfigError("batch size must be positive");
  std::uniform_int_distribution<Eigen::Index> pick_row(0, pool - 1);
  std::uniform_int_distribution<int> pick_g(0, ds.input_action.group().order() - 1);
  ActedBatch b;
  b.x.resize(batch_size, ds.inputs.cols());
  b.y.resize(batch_size, ds.targets.cols());
  for (int i = 0; i < batch_size; ++i) {
    const Eigen::Index r = pick_row(rng);
    b.x.row(i) = ds.inputs.row(r);
    b.y.row(i) = ds.targets.row(r);
  }
  b.g = pick_g(rng);
  b.gx = ds.input_action.apply_rows(b.g, b.x);
  b.gy = ds.target_action.apply_rows(b.g, b.y);
  return b;
}

IdxTensor parse_idx(const std::string& bytes, std::uint32_t expected) {
  auto u32 = [&bytes](std::size_t at, const char* what) {
    if (bytes.size() < at + 4)
      throw FormatError(std::string("truncated IDX header while reading ") + what, bytes.size());
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<unsigned char>(bytes[at + i]);
    return v;
  };
  IdxTensor t;
  t.magic = u32(0, "magic");
  if (t.magic != kIdxLabelMagic && t.magic != kIdxImageMagic)
    throw FormatError("bad IDX magic " + hex32(t.magic) + " (expected " + hex32(kIdxLabelMagic) +
                          " or " + hex32(kIdxImageMagic) + ")",
                      0);
  if (expected != 0 && t.magic != expected)
    throw FormatError("IDX magic " + hex32(t.magic) + " where " + hex32(expected) + " was expected",
                      0);
  const int rank = t.magic == kIdxImageMagic ? 3 : 1;
  std::size_t at = 4;
  std::uint64_t count = 1;
  for (int d = 0; d < rank; ++d) {
    const std::uint32_t dim = u32(at, "dimension size");
    t.dims.push_back(static_cast<int>(dim));
    count *= dim;
    at += 4;
  }
  if (bytes.size() - at < count)
    throw FormatError("truncated IDX payload: " + std::to_string(bytes.size() - at) + " of " +
                          std::to_string(count) + " bytes",
                      bytes.size());
  if (bytes.size() - at > count)
    throw FormatError("trailing bytes after the IDX payload", at + count);
  t.values.resize(static_cast<Eigen::Index>(count));
  const double scale = t.magic == kIdxImageMagic ? 1.0 / 255.0 : 1.0;
  for (std::uint64_t k = 0; k < count; ++k)
    t.values(static_cast<Eigen::Index>(k)) = static_cast<unsigned char>(bytes[at + k]) * scale;
  return t;
}

IdxTensor load_idx(const std::string& path, std::uint32_t expected) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const Error& e) {
    throw FormatError(e.what(), 0);
  }
  return parse_idx(bytes, expected);
}

void write_tensor_text(std::ostream& out, const Eigen::MatrixXd& rows) {
  out << "tensor " << rows.rows() << ' ' << rows.cols() << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", rows(i, j));
      out << (j ? " " : "") << buf;
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_tensor_text(std::istream& in) {
  std::string tag;
  Eigen::Index r = 0, c = 0;
  if (!(in >> tag >> r >> c) || tag != "tensor" || r < 0 || c < 0)
    throw FormatError("bad tensor header", 0);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j)
      if (!(in >> m(i, j))) throw FormatError("truncated tensor text", static_cast<std::size_t>(in.tellg()));
  return m;
}

}  // namespace grlt
