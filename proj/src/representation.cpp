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

#include "grlt/representation.hpp"

#include <cmath>
#include <numeric>

#include "grlt/octahedral.hpp"

namespace grlt {

bool same_group(const Group& a, const Group& b) {
  if (&a == &b) return true;
  if (a.order() != b.order()) return false;
  for (Element x = 0; x < a.order(); ++x)
    for (Element y = 0; y < a.order(); ++y)
      if (a.mul(x, y) != b.mul(x, y)) return false;
  return true;
}

std::vector<std::vector<int>> natural_permutation_action(const Group& group) {
  const GroupSpec& spec = group.spec();
  switch (spec.kind) {
    case GroupSpec::Kind::symmetric:
      return symmetric_permutations(spec.n);
    case GroupSpec::Kind::dihedral: {
      const int n = spec.n;
      std::vector<std::vector<int>> action(group.order());
      if (n == 1) {
        // The lone reflection of D1 swaps the two endpoints of a segment.
        action[0] = {0, 1};
        action[1] = {1, 0};
        return action;
      }
      for (Element e = 0; e < group.order(); ++e) {
        const int k = e % n, f = e / n;
        action[e].resize(n);
        for (int v = 0; v < n; ++v) action[e][v] = (((f ? -v : v) + k) % n + n) % n;
      }
      return action;
    }
    case GroupSpec::Kind::octahedral: {
      const auto perms = symmetric_permutations(4);
      const auto& iso = octahedral_rotations().to_symmetric;
      std::vector<std::vector<int>> action(group.order());
      for (Element e = 0; e < group.order(); ++e) action[e] = perms[iso[e]];
      return action;
    }
    default:
      return {};
  }
}

Eigen::MatrixXd helmert_basis(int n) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n - 1);
  for (int k = 1; k < n; ++k) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) q(i, k - 1) = scale;
    q(k, k - 1) = -k * scale;
  }
  return q;
}

RealRepresentation permutation_rep(const GroupPtr& group,
                                   const std::vector<std::vector<int>>& action) {
  const int order = group->order();
  if (static_cast<int>(action.size()) != order)
    throw ActionAxiomError("action table needs one row per group element");
  const int m = static_cast<int>(action.front().size());
  if (m < 1) throw ActionAxiomError("action must move at least one point");
  for (Element g = 0; g < order; ++g) {
    std::vector<bool> hit(m, false);
    if (static_cast<int>(action[g].size()) != m)
      throw ActionAxiomError("action rows have inconsistent lengths");
    for (int p : action[g]) {
      if (p < 0 || p >= m || hit[p])
        throw ActionAxiomError("row " + std::to_string(g) + " is not a permutation");
      hit[p] = true;
    }
  }
  for (Element g = 0; g < order; ++g) {
    for (Element h = 0; h < order; ++h) {
      const auto& gh = action[group->mul(g, h)];
      for (int i = 0; i < m; ++i) {
        if (gh[i] != action[g][action[h][i]])
          throw ActionAxiomError("action[gh] != action[g] o action[h] for (g, h) = (" +
                                 std::to_string(g) + ", " + std::to_string(h) + ")");
      }
    }
  }
  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(order);
  for (Element g = 0; g < order; ++g) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) p(action[g][i], i) = 1.0;
    mats.push_back(std::move(p));
  }
  return RealRepresentation(group, std::move(mats));
}

RealRepresentation named_rep(const GroupPtr& group, NamedRep kind) {
  const int order = group->order();
  switch (kind) {
    case NamedRep::trivial:
      return RealRepresentation(group,
                                std::vector<Eigen::MatrixXd>(order, Eigen::MatrixXd::Ones(1, 1)));
    case NamedRep::regular: {
      std::vector<std::vector<int>> action(order, std::vector<int>(order));
      for (Element g = 0; g < order; ++g)
        for (Element h = 0; h < order; ++h) action[g][h] = group->mul(g, h);
      return permutation_rep(group, action);
    }
    case NamedRep::sign:
    case NamedRep::standard:
      break;
  }
  const auto action = natural_permutation_action(*group);
  if (action.empty())
    throw UnsupportedRepresentationError("group " + group->name() +
                                         " has no natural permutation action for sign/standard");
  const RealRepresentation perm = permutation_rep(group, action);
  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(order);
  if (kind == NamedRep::sign) {
    for (Element g = 0; g < order; ++g) {
      // Parity from the cycle structure keeps the entries exactly +-1.
      const auto& p = action[g];
      std::vector<bool> seen(p.size(), false);
      int transpositions = 0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
          seen[j] = true;
          ++len;
        }
        transpositions += len - 1;
      }
      mats.push_back(Eigen::MatrixXd::Constant(1, 1, transpositions % 2 ? -1.0 : 1.0));
    }
    return RealRepresentation(group, std::move(mats));
  }
  const int n = perm.dim();
  if (n < 2) throw UnsupportedRepresentationError("standard representation would be zero-dimensional");
  const Eigen::MatrixXd q = helmert_basis(n);
  for (Element g = 0; g < order; ++g) mats.push_back(q.transpose() * perm[g] * q);
  return RealRepresentation(group, std::move(mats));
}

ComplexRepresentation to_complex(const RealRepresentation& rep) {
  std::vector<Eigen::MatrixXcd> mats;
  mats.reserve(rep.matrices().size());
  for (const auto& m : rep.matrices()) mats.push_back(m.cast<std::complex<double>>());
  return ComplexRepresentation(rep.group_ptr(), std::move(mats));
}

RealRepresentation latent_rep(const GroupPtr& group, int latent_dim, int n) {
  if (n < 1) throw CapacityError("need at least one copy of the regular representation");
  if (latent_dim < 1) throw CapacityError("latent dimension must be positive");
  const long needed = static_cast<long>(n) * group->order();
  if (needed > latent_dim)
    throw CapacityError(std::to_string(n) + " copies of the regular representation of " +
                        group->name() + " need dimension " + std::to_string(needed) +
                        " but the latent dimension is " + std::to_string(latent_dim));
  const int order = group->order();
  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(order);
  for (Element g = 0; g < order; ++g) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(latent_dim, latent_dim);
    for (int copy = 0; copy < n; ++copy) {
      const int base = copy * order;
      m.block(base, base, order, order).setZero();
      for (Element h = 0; h < order; ++h) m(base + group->mul(g, h), base + h) = 1.0;
    }
    mats.push_back(std::move(m));
  }
  return RealRepresentation(group, std::move(mats));
}

RealRepresentation channelwise_latent_rep(const GroupPtr& group, int channels,
                                          int per_channel_dim, int n) {
  if (channels < 1) throw CapacityError("need at least one channel");
  const RealRepresentation block = latent_rep(group, per_channel_dim, n);
  const int dim = channels * per_channel_dim;
  std::vector<Eigen::MatrixXd> mats;
  mats.reserve(group->order());
  for (Element g = 0; g < group->order(); ++g) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (int c = 0; c < channels; ++c)
      m.block(c * per_channel_dim, c * per_channel_dim, per_channel_dim, per_channel_dim) =
          block[g];
    mats.push_back(std::move(m));
  }
  return RealRepresentation(group, std::move(mats));
}

std::complex<double> rep_inner_product(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  if (a.size() != b.size() || a.size() == 0)
    throw IncompatibleError("characters of different groups");
  return a.dot(b) / static_cast<double>(a.size());  // Eigen's dot conjugates the left operand.
}

}  // namespace grlt
