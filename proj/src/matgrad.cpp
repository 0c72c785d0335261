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

#include "grlt/matgrad.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include <Eigen/LU>

#include "grlt/errors.hpp"

namespace grlt {

namespace {

constexpr double kSingularRcond = 1e-12;
constexpr double kGradCheckRcond = 1e-8;
constexpr double kRelativeFloor = 1e-8;

std::atomic<int> g_fault{-1};

std::string shape_of(Eigen::Index r, Eigen::Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

double relative_error(double analytic, double numeric, double floor = kRelativeFloor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

}  // namespace

const char* op_name(Op op) {
  switch (op) {
    case Op::parameter: return "parameter";
    case Op::constant: return "constant";
    case Op::matmul: return "matmul";
    case Op::add: return "add";
    case Op::sub: return "sub";
    case Op::scale: return "scale";
    case Op::transpose: return "transpose";
    case Op::inverse: return "inverse";
    case Op::frobenius_mse: return "frobenius_mse";
  }
  return "unknown";
}

void set_backward_fault(std::optional<Op> op) { g_fault = op ? static_cast<int>(*op) : -1; }

std::optional<Op> backward_fault() {
  const int f = g_fault;
  if (f < 0) return std::nullopt;
  return static_cast<Op>(f);
}

Eigen::Index Expr::rows() const { return graph_->value_shape_rows(id_); }
Eigen::Index Expr::cols() const { return graph_->value_shape_cols(id_); }

Expr ExprGraph::push(Node node) {
  nodes_.push_back(std::move(node));
  return Expr(this, static_cast<int>(nodes_.size()) - 1);
}

void ExprGraph::check_owner(Expr e) const {
  if (&e.graph() != this || e.id() < 0 || e.id() >= static_cast<int>(nodes_.size()))
    throw ContractError("expression belongs to a different graph");
}

Expr ExprGraph::parameter(Eigen::MatrixXd value, std::string name) {
  Node n{Op::parameter};
  n.rows = value.rows();
  n.cols = value.cols();
  n.value = std::move(value);
  n.name = std::move(name);
  return push(std::move(n));
}

Expr ExprGraph::constant(Eigen::MatrixXd value) {
  Node n{Op::constant};
  n.rows = value.rows();
  n.cols = value.cols();
  n.value = std::move(value);
  return push(std::move(n));
}

Expr ExprGraph::matmul(Expr a, Expr b) {
  check_owner(a);
  check_owner(b);
  const Node &x = nodes_[a.id()], &y = nodes_[b.id()];
  if (x.cols != y.rows)
    throw ShapeError("matmul of " + shape_of(x.rows, x.cols) + " by " + shape_of(y.rows, y.cols));
  Node n{Op::matmul, a.id(), b.id()};
  n.rows = x.rows;
  n.cols = y.cols;
  return push(std::move(n));
}

Expr ExprGraph::add(Expr a, Expr b) {
  check_owner(a);
  check_owner(b);
  const Node &x = nodes_[a.id()], &y = nodes_[b.id()];
  if (x.rows != y.rows || x.cols != y.cols)
    throw ShapeError("add of " + shape_of(x.rows, x.cols) + " and " + shape_of(y.rows, y.cols));
  Node n{Op::add, a.id(), b.id()};
  n.rows = x.rows;
  n.cols = x.cols;
  return push(std::move(n));
}

Expr ExprGraph::sub(Expr a, Expr b) {
  check_owner(a);
  check_owner(b);
  const Node &x = nodes_[a.id()], &y = nodes_[b.id()];
  if (x.rows != y.rows || x.cols != y.cols)
    throw ShapeError("sub of " + shape_of(x.rows, x.cols) + " and " + shape_of(y.rows, y.cols));
  Node n{Op::sub, a.id(), b.id()};
  n.rows = x.rows;
  n.cols = x.cols;
  return push(std::move(n));
}

Expr ExprGraph::scale(double c, Expr a) {
  check_owner(a);
  Node n{Op::scale, a.id()};
  n.coefficient = c;
  n.rows = nodes_[a.id()].rows;
  n.cols = nodes_[a.id()].cols;
  return push(std::move(n));
}

Expr ExprGraph::transpose(Expr a) {
  check_owner(a);
  Node n{Op::transpose, a.id()};
  n.rows = nodes_[a.id()].cols;
  n.cols = nodes_[a.id()].rows;
  return push(std::move(n));
}

Expr ExprGraph::inverse(Expr a) {
  check_owner(a);
  const Node& x = nodes_[a.id()];
  if (x.rows != x.cols) throw ShapeError("inverse of non-square " + shape_of(x.rows, x.cols));
  Node n{Op::inverse, a.id()};
  n.rows = x.rows;
  n.cols = x.cols;
  return push(std::move(n));
}

Expr ExprGraph::frobenius_mse(Expr a, Expr b) {
  check_owner(a);
  check_owner(b);
  const Node &x = nodes_[a.id()], &y = nodes_[b.id()];
  if (x.rows != y.rows || x.cols != y.cols)
    throw ShapeError("mse of " + shape_of(x.rows, x.cols) + " and " + shape_of(y.rows, y.cols));
  Node n{Op::frobenius_mse, a.id(), b.id()};
  n.rows = 1;
  n.cols = 1;
  return push(std::move(n));
}

void ExprGraph::set_value(Expr leaf, const Eigen::MatrixXd& value) {
  check_owner(leaf);
  Node& n = nodes_[leaf.id()];
  if (n.op != Op::parameter && n.op != Op::constant)
    throw ContractError("only leaves can be rebound");
  if (value.rows() != n.rows || value.cols() != n.cols)
    throw ShapeError("cannot rebind " + shape_of(n.rows, n.cols) + " leaf to " +
                     shape_of(value.rows(), value.cols()));
  n.value = value;
  for (Node& other : nodes_)
    if (other.op != Op::parameter && other.op != Op::constant) other.fresh = false;
}

std::vector<bool> ExprGraph::reachable(const std::vector<int>& roots) const {
  std::vector<bool> hit(nodes_.size(), false);
  for (int r : roots) hit[r] = true;
  for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
    if (!hit[i]) continue;
    if (nodes_[i].a >= 0) hit[nodes_[i].a] = true;
    if (nodes_[i].b >= 0) hit[nodes_[i].b] = true;
  }
  return hit;
}

const Eigen::MatrixXd& ExprGraph::evaluate(Expr root) {
  check_owner(root);
  const std::vector<bool> hit = reachable({root.id()});
  min_rcond_ = 1.0;
  for (int i = 0; i <= root.id(); ++i) {
    if (!hit[i]) continue;
    Node& n = nodes_[i];
    switch (n.op) {
      case Op::parameter:
      case Op::constant:
        break;
      case Op::matmul:
        n.value.noalias() = nodes_[n.a].value * nodes_[n.b].value;
        break;
      case Op::add:
        n.value = nodes_[n.a].value + nodes_[n.b].value;
        break;
      case Op::sub:
        n.value = nodes_[n.a].value - nodes_[n.b].value;
        break;
      case Op::scale:
        n.value = n.coefficient * nodes_[n.a].value;
        break;
      case Op::transpose:
        n.value = nodes_[n.a].value.transpose();
        break;
      case Op::inverse: {
        const Eigen::MatrixXd& a = nodes_[n.a].value;
        if (!a.allFinite()) throw SingularMatrixError(i, 0.0);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
        const double rcond = lu.rcond();
        if (!(rcond >= kSingularRcond)) throw SingularMatrixError(i, rcond);
        min_rcond_ = std::min(min_rcond_, rcond);
        n.value = lu.solve(Eigen::MatrixXd::Identity(n.rows, n.cols));
        break;
      }
      case Op::frobenius_mse: {
        const double sq = (nodes_[n.a].value - nodes_[n.b].value).squaredNorm();
        n.value = Eigen::MatrixXd::Constant(1, 1, sq / static_cast<double>(nodes_[n.a].value.size()));
        break;
      }
    }
    n.fresh = true;
  }
  return nodes_[root.id()].value;
}

double ExprGraph::evaluate_scalar(Expr root) {
  const Eigen::MatrixXd& v = evaluate(root);
  if (v.rows() != 1 || v.cols() != 1) throw ContractError("root is not scalar-valued");
  return v(0, 0);
}

const Eigen::MatrixXd& ExprGraph::value(Expr node) const {
  check_owner(node);
  const Node& n = nodes_[node.id()];
  if (n.op != Op::parameter && n.op != Op::constant && !n.fresh)
    throw ContractError("node " + std::to_string(node.id()) + " has not been evaluated");
  return n.value;
}

Eigen::Index ExprGraph::value_shape_rows(int id) const { return nodes_.at(id).rows; }
Eigen::Index ExprGraph::value_shape_cols(int id) const { return nodes_.at(id).cols; }

void ExprGraph::backward(Expr root) {
  check_owner(root);
  const Node& n = nodes_[root.id()];
  if (n.rows != 1 || n.cols != 1) throw ContractError("backward needs a scalar root");
  backward({{root, Eigen::MatrixXd::Ones(1, 1)}});
}

void ExprGraph::backward(const std::vector<std::pair<Expr, Eigen::MatrixXd>>& seeds) {
  std::vector<int> roots;
  for (const auto& [e, seed] : seeds) {
    check_owner(e);
    const Node& n = nodes_[e.id()];
    if (seed.rows() != n.rows || seed.cols() != n.cols)
      throw ShapeError("seed shape " + shape_of(seed.rows(), seed.cols()) + " for node of shape " +
                       shape_of(n.rows, n.cols));
    roots.push_back(e.id());
  }
  const std::vector<bool> hit = reachable(roots);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (hit[i] && n.op != Op::parameter && n.op != Op::constant && !n.fresh)
      throw ContractError("backward called before the forward pass");
  }
  grads_.assign(nodes_.size(), Eigen::MatrixXd());
  has_grad_.assign(nodes_.size(), false);
  auto accumulate = [this](int id, const Eigen::MatrixXd& g) {
    if (has_grad_[id]) {
      grads_[id] += g;
    } else {
      grads_[id] = g;
      has_grad_[id] = true;
    }
  };
  for (const auto& [e, seed] : seeds) accumulate(e.id(), seed);

  const std::optional<Op> fault = backward_fault();
  int top = roots.empty() ? -1 : *std::max_element(roots.begin(), roots.end());
  for (int i = top; i >= 0; --i) {
    if (!has_grad_[i]) continue;
    const Node& n = nodes_[i];
    const double f = fault && *fault == n.op ? 1.5 : 1.0;
    const Eigen::MatrixXd& g = grads_[i];
    switch (n.op) {
      case Op::parameter:
      case Op::constant:
        break;
      case Op::matmul:
        accumulate(n.a, f * g * nodes_[n.b].value.transpose());
        accumulate(n.b, f * nodes_[n.a].value.transpose() * g);
        break;
      case Op::add:
        accumulate(n.a, f * g);
        accumulate(n.b, f * g);
        break;
      case Op::sub:
        accumulate(n.a, f * g);
        accumulate(n.b, -f * g);
        break;
      case Op::scale:
        accumulate(n.a, f * n.coefficient * g);
        break;
      case Op::transpose:
        accumulate(n.a, f * g.transpose());
        break;
      case Op::inverse: {
        const auto inv_t = n.value.transpose();
        accumulate(n.a, -f * inv_t * g * inv_t);
        break;
      }
      case Op::frobenius_mse: {
        const Eigen::MatrixXd& a = nodes_[n.a].value;
        const Eigen::MatrixXd d =
            (f * 2.0 * g(0, 0) / static_cast<double>(a.size())) * (a - nodes_[n.b].value);
        accumulate(n.a, d);
        accumulate(n.b, -d);
        break;
      }
    }
  }
}

Eigen::MatrixXd ExprGraph::grad(Expr node) const {
  check_owner(node);
  const Node& n = nodes_[node.id()];
  if (static_cast<std::size_t>(node.id()) < has_grad_.size() && has_grad_[node.id()])
    return grads_[node.id()];
  return Eigen::MatrixXd::Zero(n.rows, n.cols);
}

std::vector<Expr> ExprGraph::parameters() const {
  std::vector<Expr> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].op == Op::parameter)
      out.emplace_back(const_cast<ExprGraph*>(this), static_cast<int>(i));
  return out;
}

std::vector<Expr> ExprGraph::children(Expr node) {
  check_owner(node);
  std::vector<Expr> out;
  const Node& n = nodes_[node.id()];
  if (n.a >= 0) out.emplace_back(this, n.a);
  if (n.b >= 0) out.emplace_back(this, n.b);
  return out;
}

Expr operator*(Expr a, Expr b) { return a.graph().matmul(a, b); }
Expr operator+(Expr a, Expr b) { return a.graph().add(a, b); }
Expr operator-(Expr a, Expr b) { return a.graph().sub(a, b); }
Expr operator*(double c, Expr a) { return a.graph().scale(c, a); }
Expr transpose(Expr a) { return a.graph().transpose(a); }
Expr inverse(Expr a) { return a.graph().inverse(a); }
Expr mse(Expr a, Expr b) { return a.graph().frobenius_mse(a, b); }

GradCheckResult finite_diff_check(ExprGraph& graph, Expr root, double h) {
  if (!(h > 0)) throw ContractError("finite-difference step must be positive");
  GradCheckResult result;
  graph.evaluate_scalar(root);
  if (graph.min_inverse_rcond() < kGradCheckRcond) {
    result.skipped = true;
    result.warning = "skipped: inverse condition number above 1e8 (rcond " +
                     std::to_string(graph.min_inverse_rcond()) + ")";
    return result;
  }
  graph.backward(root);
  for (Expr p : graph.parameters()) {
    const Eigen::MatrixXd analytic = graph.grad(p);
    Eigen::MatrixXd x = graph.value(p);
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const double saved = x(k);
      x(k) = saved + h;
      graph.set_value(p, x);
      const double up = graph.evaluate_scalar(root);
      x(k) = saved - h;
      graph.set_value(p, x);
      const double down = graph.evaluate_scalar(root);
      x(k) = saved;
      graph.set_value(p, x);
      const double numeric = (up - down) / (2.0 * h);
      result.max_relative_error =
          std::max(result.max_relative_error, relative_error(analytic(k), numeric));
    }
  }
  graph.evaluate(root);
  return result;
}

GradCheckResult finite_diff_check(const std::function<double(const Eigen::VectorXd&)>& loss,
                                  const Eigen::VectorXd& params, const Eigen::VectorXd& analytic,
                                  double h, double floor) {
  if (!(h > 0)) throw ContractError("finite-difference step must be positive");
  if (!(floor > 0)) throw ContractError("relative-error floor must be positive");
  if (params.size() != analytic.size())
    throw ShapeError("analytic gradient has " + std::to_string(analytic.size()) +
                     " entries for " + std::to_string(params.size()) + " parameters");
  GradCheckResult result;
  Eigen::VectorXd x = params;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double saved = x(k);
    x(k) = saved + h;
    const double up = loss(x);
    x(k) = saved - h;
    const double down = loss(x);
    x(k) = saved;
    result.max_relative_error =
        std::max(result.max_relative_error, relative_error(analytic(k), (up - down) / (2.0 * h), floor));
  }
  return result;
}

}  // namespace grlt
