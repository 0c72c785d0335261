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

#include "grlt/character_table.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

#include "grlt/octahedral.hpp"

namespace grlt {

namespace {

using cd = std::complex<double>;

constexpr int kMaxCyclicTable = 64;
constexpr double kTableTolerance = 1e-9;

Irrep from_realization(std::string name, std::vector<Eigen::MatrixXcd> mats) {
  Irrep irrep;
  irrep.name = std::move(name);
  irrep.dim = static_cast<int>(mats.front().rows());
  irrep.character.resize(static_cast<Eigen::Index>(mats.size()));
  for (std::size_t g = 0; g < mats.size(); ++g) irrep.character(static_cast<Eigen::Index>(g)) = mats[g].trace();
  irrep.realization = std::move(mats);
  return irrep;
}

std::vector<Eigen::MatrixXcd> complexify(const RealRepresentation& rep) {
  return to_complex(rep).matrices();
}

std::vector<Irrep> cyclic_irreps(int n) {
  if (n > kMaxCyclicTable) throw MissingTableError("cyclic character tables supported up to n = 64");
  std::vector<Irrep> out;
  for (int k = 0; k < n; ++k) {
    std::vector<Eigen::MatrixXcd> mats;
    for (int j = 0; j < n; ++j) {
      // Exact values at quarter turns so C2/C4 tables carry no rounding.
      const int q = (k * j) % n;
      cd v;
      if ((4 * q) % n == 0) {
        static const cd quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        v = quarter[(4 * q) / n];
      } else {
        v = std::polar(1.0, 2.0 * std::numbers::pi * q / n);
      }
      mats.push_back(Eigen::MatrixXcd::Constant(1, 1, v));
    }
    std::string name;
    if (n == 1) {
      name = "trivial";
    } else if (n == 2) {
      name = k == 0 ? "+1" : "-1";
    } else if (n == 4) {
      static const char* names[4] = {"+1", "+i", "-1", "-i"};
      name = names[k];
    } else {
      name = "w^" + std::to_string(k);
    }
    out.push_back(from_realization(std::move(name), std::move(mats)));
  }
  return out;
}

std::vector<Irrep> dihedral_irreps(int n) {
  const int order = 2 * n;
  auto one_dim = [order, n](double r, double s) {
    std::vector<Eigen::MatrixXcd> mats;
    for (Element e = 0; e < order; ++e) {
      const int k = e % n, f = e / n;
      mats.push_back(Eigen::MatrixXcd::Constant(1, 1, std::pow(r, k) * std::pow(s, f)));
    }
    return mats;
  };
  std::vector<Irrep> out;
  if (n == 1) {
    out.push_back(from_realization("+1", one_dim(1, 1)));
    out.push_back(from_realization("-1", one_dim(1, -1)));
    return out;
  }
  if (n % 2) {
    out.push_back(from_realization("trivial", one_dim(1, 1)));
    out.push_back(from_realization("sign", one_dim(1, -1)));
  } else {
    out.push_back(from_realization("A1", one_dim(1, 1)));
    out.push_back(from_realization("A2", one_dim(1, -1)));
    out.push_back(from_realization("B1", one_dim(-1, 1)));
    out.push_back(from_realization("B2", one_dim(-1, -1)));
  }
  for (int j = 1; 2 * j < n; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / n;
    Eigen::Matrix2d r;
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    const Eigen::Matrix2d s = Eigen::Vector2d(1, -1).asDiagonal();
    std::vector<Eigen::MatrixXcd> mats;
    for (Element e = 0; e < order; ++e) {
      const int k = e % n, f = e / n;
      Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
      for (int t = 0; t < k; ++t) m = m * r;
      if (f) m = m * s;
      mats.push_back(m.cast<cd>());
    }
    std::string name = n == 3 ? "standard" : (n == 4 ? "E" : "E" + std::to_string(j));
    out.push_back(from_realization(std::move(name), std::move(mats)));
  }
  return out;
}

// Young's orthogonal form on standard tableaux of shape `shape`. For the
// transposition of values i and i+1 with axial distance r, the tableau T maps
// to T/r + sqrt(1 - 1/r^2) T', T' being T with i and i+1 exchanged.
std::vector<Eigen::MatrixXd> young_generators(const std::vector<int>& shape, int n) {
  std::vector<std::vector<int>> rows, cols;  // per tableau: row and column of each value
  std::vector<int> row(n), col(n), filled(shape.size(), 0);
  std::function<void(int)> fill = [&](int v) {
    if (v == n) {
      rows.push_back(row);
      cols.push_back(col);
      return;
    }
    for (std::size_t r = 0; r < shape.size(); ++r) {
      if (filled[r] == shape[r] || (r > 0 && filled[r] >= filled[r - 1])) continue;
      row[v] = static_cast<int>(r);
      col[v] = filled[r]++;
      fill(v + 1);
      --filled[r];
    }
  };
  fill(0);
  const auto count = static_cast<Eigen::Index>(rows.size());
  auto find = [&](const std::vector<int>& rr, const std::vector<int>& cc) {
    for (Eigen::Index t = 0; t < count; ++t)
      if (rows[t] == rr && cols[t] == cc) return t;
    throw NumericalError("tableau exchange left the standard set");
  };
  std::vector<Eigen::MatrixXd> out;
  for (int i = 0; i + 1 < n; ++i) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(count, count);
    for (Eigen::Index t = 0; t < count; ++t) {
      const int r = (cols[t][i + 1] - rows[t][i + 1]) - (cols[t][i] - rows[t][i]);
      m(t, t) = 1.0 / r;
      if (r == 1 || r == -1) continue;
      std::vector<int> rr = rows[t], cc = cols[t];
      std::swap(rr[i], rr[i + 1]);
      std::swap(cc[i], cc[i + 1]);
      m(find(rr, cc), t) = std::sqrt(1.0 - 1.0 / (static_cast<double>(r) * r));
    }
    out.push_back(std::move(m));
  }
  return out;
}

// Extends generator images to every element by breadth-first search with the
// group's own multiplication, so no composition convention leaks in.
std::vector<Eigen::MatrixXcd> extend_from_transpositions(const Group& group, int n,
                                                         const std::vector<Eigen::MatrixXd>& images) {
  const auto perms = symmetric_permutations(n);
  std::vector<Element> transpositions;
  for (int i = 0; i + 1 < n; ++i) {
    for (Element e = 0; e < group.order(); ++e) {
      bool match = true;
      for (int k = 0; k < n; ++k) {
        const int expect = k == i ? i + 1 : (k == i + 1 ? i : k);
        match = match && perms[e][k] == expect;
      }
      if (match) transpositions.push_back(e);
    }
  }
  const Eigen::Index dim = images.front().rows();
  std::vector<Eigen::MatrixXd> mats(group.order());
  std::vector<bool> seen(group.order(), false);
  mats[0] = Eigen::MatrixXd::Identity(dim, dim);
  seen[0] = true;
  std::vector<Element> frontier{0};
  while (!frontier.empty()) {
    std::vector<Element> next;
    for (Element x : frontier)
      for (std::size_t t = 0; t < transpositions.size(); ++t) {
        const Element y = group.mul(x, transpositions[t]);
        if (seen[y]) continue;
        seen[y] = true;
        mats[y] = mats[x] * images[t];
        next.push_back(y);
      }
    frontier = std::move(next);
  }
  std::vector<Eigen::MatrixXcd> out;
  for (const auto& m : mats) out.push_back(m.cast<cd>());
  return out;
}

std::vector<Irrep> young_irreps(const GroupPtr& group, int n) {
  std::vector<std::vector<int>> partitions;
  std::vector<int> current;
  std::function<void(int, int)> split = [&](int left, int largest) {
    if (left == 0) {
      partitions.push_back(current);
      return;
    }
    for (int part = std::min(left, largest); part >= 1; --part) {
      current.push_back(part);
      split(left - part, part);
      current.pop_back();
    }
  };
  split(n, n);
  std::vector<Irrep> out;
  for (const auto& shape : partitions) {
    std::string name = "(";
    for (std::size_t k = 0; k < shape.size(); ++k) name += (k ? "," : "") + std::to_string(shape[k]);
    name += ")";
    out.push_back(from_realization(std::move(name), extend_from_transpositions(*group, n, young_generators(shape, n))));
  }
  return out;
}

std::vector<Irrep> symmetric_irreps(const GroupPtr& group, int n) {
  std::vector<Irrep> out;
  out.push_back(from_realization("trivial", complexify(named_rep(group, NamedRep::trivial))));
  if (n == 1) return out;
  const RealRepresentation sign = named_rep(group, NamedRep::sign);
  out.push_back(from_realization("sign", complexify(sign)));
  if (n == 2) return out;
  const RealRepresentation standard = named_rep(group, NamedRep::standard);
  if (n == 3) {
    out.push_back(from_realization("standard", complexify(standard)));
    return out;
  }
  if (n > 4) return young_irreps(group, n);

  // S4 -> S3 through the action on the three pairings {01|23}, {02|13}, {03|12}.
  const auto perms = symmetric_permutations(4);
  const Eigen::MatrixXd q3 = helmert_basis(3);
  auto pairing_of = [](int a, int b) {
    const int other = a == 0 ? b : (b == 0 ? a : 6 - a - b);
    return other - 1;  // the partner of 0 identifies the pairing
  };
  std::vector<Eigen::MatrixXcd> two_dim;
  for (const auto& p : perms) {
    std::vector<int> image(3);
    for (int k = 0; k < 3; ++k) {
      const int a = 0, b = k + 1;
      image[k] = pairing_of(p[a], p[b]);
    }
    Eigen::Matrix3d pm = Eigen::Matrix3d::Zero();
    for (int k = 0; k < 3; ++k) pm(image[k], k) = 1.0;
    two_dim.push_back((q3.transpose() * pm * q3).cast<cd>());
  }
  out.push_back(from_realization("two-dim", std::move(two_dim)));
  out.push_back(from_realization("standard", complexify(standard)));
  std::vector<Eigen::MatrixXcd> twisted;
  for (Element e = 0; e < group->order(); ++e) twisted.push_back((sign[e](0, 0) * standard[e]).cast<cd>());
  out.push_back(from_realization("standard x sign", std::move(twisted)));
  return out;
}

std::vector<Irrep> irreps_for(const GroupPtr& group);

std::vector<Irrep> product_irreps(const GroupPtr& group) {
  const GroupSpec& spec = group->spec();
  const GroupPtr a = build_group(spec.factors.at(0));
  const GroupPtr b = build_group(spec.factors.at(1));
  const auto ta = irreps_for(a);
  const auto tb = irreps_for(b);
  const int na = a->order();
  std::vector<Irrep> out;
  for (const Irrep& ib : tb) {
    for (const Irrep& ia : ta) {
      std::vector<Eigen::MatrixXcd> mats;
      for (Element e = 0; e < group->order(); ++e) {
        Eigen::MatrixXcd m = Eigen::kroneckerProduct(ia.realization[e % na], ib.realization[e / na]);
        mats.push_back(std::move(m));
      }
      out.push_back(from_realization(ia.name + "(x)" + ib.name, std::move(mats)));
    }
  }
  return out;
}

std::vector<Irrep> irreps_for(const GroupPtr& group) {
  const GroupSpec& spec = group->spec();
  switch (spec.kind) {
    case GroupSpec::Kind::cyclic:
      return cyclic_irreps(spec.n);
    case GroupSpec::Kind::dihedral:
      return dihedral_irreps(spec.n);
    case GroupSpec::Kind::symmetric:
      return symmetric_irreps(group, spec.n);
    case GroupSpec::Kind::product:
      return product_irreps(group);
    case GroupSpec::Kind::octahedral: {
      const GroupPtr s4 = symmetric(4);
      const auto base = symmetric_irreps(s4, 4);
      const auto& iso = octahedral_rotations().to_symmetric;
      std::vector<Irrep> out;
      for (const Irrep& irrep : base) {
        std::vector<Eigen::MatrixXcd> mats;
        for (Element e = 0; e < group->order(); ++e) mats.push_back(irrep.realization[iso[e]]);
        out.push_back(from_realization(irrep.name, std::move(mats)));
      }
      return out;
    }
    case GroupSpec::Kind::custom:
      break;
  }
  throw MissingTableError("no character table for group " + group->name());
}

void validate(const CharacterTable& table) {
  const Group& g = *table.group;
  int dim_squares = 0;
  for (const Irrep& irrep : table.irreps) {
    dim_squares += irrep.dim * irrep.dim;
    for (Element x = 0; x < g.order(); ++x)
      for (Element h = 0; h < g.order(); ++h) {
        const Element conj = g.mul(g.mul(h, x), g.inverse(h));
        if (std::abs(irrep.character(conj) - irrep.character(x)) > kTableTolerance)
          throw NumericalError("character " + irrep.name + " is not a class function");
      }
    if (homomorphism_residual(irrep.realization, g) > kTableTolerance)
      throw NumericalError("realization of " + irrep.name + " is not a homomorphism");
  }
  if (dim_squares != g.order()) throw NumericalError("irrep dimensions do not square-sum to |G|");
  if (orthonormality_defect(table) > kTableTolerance)
    throw NumericalError("character table is not orthonormal for " + g.name());
}

}  // namespace

double orthonormality_defect(const CharacterTable& table) {
  double worst = 0.0;
  for (std::size_t i = 0; i < table.irreps.size(); ++i)
    for (std::size_t j = 0; j < table.irreps.size(); ++j) {
      const cd ip = rep_inner_product(table.irreps[i].character, table.irreps[j].character);
      worst = std::max(worst, std::abs(ip - cd(i == j ? 1.0 : 0.0)));
    }
  return worst;
}

std::shared_ptr<const CharacterTable> char_table(const GroupPtr& group) {
  static std::mutex mutex;
  static std::map<std::string, std::shared_ptr<const CharacterTable>> cache;
  if (group->spec().kind == GroupSpec::Kind::custom)
    throw MissingTableError("no character table for group " + group->name());
  const std::string key = group->spec().name();
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end() && same_group(*it->second->group, *group)) return it->second;
  }
  auto table = std::make_shared<CharacterTable>();
  table->group = group;
  table->irreps = irreps_for(group);
  validate(*table);
  std::lock_guard<std::mutex> lock(mutex);
  cache[key] = table;
  return table;
}

Multiplicities decompose_character(const Eigen::VectorXcd& chi, int dim,
                                   const CharacterTable& table) {
  const auto k = static_cast<Eigen::Index>(table.irreps.size());
  Multiplicities m;
  m.raw.resize(k);
  m.rounded.resize(k);
  int total = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const cd ip = rep_inner_product(table.irreps[i].character, chi);
    m.raw(i) = ip.real();
    m.rounded(i) = static_cast<int>(std::lround(ip.real()));
    m.max_rounding_error = std::max(m.max_rounding_error, std::abs(ip.real() - m.rounded(i)));
    m.imaginary_residue = std::max(m.imaginary_residue, std::abs(ip.imag()));
    total += m.rounded(i) * table.irreps[i].dim;
  }
  m.dimension_consistent = total == dim;
  return m;
}

}  // namespace grlt
