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

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace grlt {

enum class Op { parameter, constant, matmul, add, sub, scale, transpose, inverse, frobenius_mse };

const char* op_name(Op op);

class ExprGraph;

/// Handle to a node of an ExprGraph. Cheap to copy; valid while the graph lives.
class Expr {
 public:
  Expr() = default;
  Expr(ExprGraph* graph, int id) : graph_(graph), id_(id) {}

  ExprGraph& graph() const { return *graph_; }
  int id() const { return id_; }
  bool valid() const { return graph_ != nullptr; }
  Eigen::Index rows() const;
  Eigen::Index cols() const;

 private:
  ExprGraph* graph_ = nullptr;
  int id_ = -1;
};

/// Reverse-mode differentiation over dense matrix expressions. Scalars are
/// 1x1 matrices. Nodes are appended in topological order; shapes are checked
/// when a node is created.
class ExprGraph {
 public:
  ExprGraph() = default;
  ExprGraph(const ExprGraph&) = delete;
  ExprGraph& operator=(const ExprGraph&) = delete;

  Expr parameter(Eigen::MatrixXd value, std::string name = {});
  Expr constant(Eigen::MatrixXd value);
  Expr identity(Eigen::Index d) { return constant(Eigen::MatrixXd::Identity(d, d)); }

  Expr matmul(Expr a, Expr b);
  Expr add(Expr a, Expr b);
  Expr sub(Expr a, Expr b);
  Expr scale(double c, Expr a);
  Expr transpose(Expr a);
  Expr inverse(Expr a);
  /// Mean over entries of (a - b)^2.
  Expr frobenius_mse(Expr a, Expr b);

  /// Rebinds a parameter (or constant) leaf. Shape must not change.
  void set_value(Expr leaf, const Eigen::MatrixXd& value);

  /// Forward pass over the nodes reachable from `root`; caches their values.
  /// Throws SingularMatrixError when an inverse has rcond < 1e-12.
  const Eigen::MatrixXd& evaluate(Expr root);
  double evaluate_scalar(Expr root);

  /// Cached forward value. Throws ContractError if the node is stale.
  const Eigen::MatrixXd& value(Expr node) const;

  /// Gradient of a scalar root with respect to every node, seeded with 1.
  /// The forward pass must be current. Throws ContractError otherwise.
  void backward(Expr root);
  /// Seeds several nodes at once: the result is the gradient of
  /// sum_k <seed_k, node_k>. Useful to splice in gradients from outside.
  void backward(const std::vector<std::pair<Expr, Eigen::MatrixXd>>& seeds);

  /// Gradient accumulated by the last backward call (zero if unreached).
  Eigen::MatrixXd grad(Expr node) const;

  std::vector<Expr> parameters() const;
  Eigen::Index value_shape_rows(int id) const;
  Eigen::Index value_shape_cols(int id) const;
  std::size_t size() const { return nodes_.size(); }
  Op op(Expr node) const { return nodes_.at(node.id()).op; }
  std::vector<Expr> children(Expr node);
  double coefficient(Expr node) const { return nodes_.at(node.id()).coefficient; }
  const std::string& name(Expr node) const { return nodes_.at(node.id()).name; }

  /// Smallest reciprocal condition estimate over inverse nodes in the last
  /// forward pass (1 if there were none).
  double min_inverse_rcond() const { return min_rcond_; }

 private:
  struct Node {
    explicit Node(Op o, int x = -1, int y = -1) : op(o), a(x), b(y) {}
    Op op;
    int a = -1, b = -1;
    double coefficient = 1.0;
    Eigen::Index rows = 0, cols = 0;
    std::string name;
    Eigen::MatrixXd value;
    bool fresh = false;
  };

  Expr push(Node node);
  void check_owner(Expr e) const;
  std::vector<bool> reachable(const std::vector<int>& roots) const;

  std::vector<Node> nodes_;
  std::vector<Eigen::MatrixXd> grads_;
  std::vector<bool> has_grad_;
  double min_rcond_ = 1.0;
};

Expr operator*(Expr a, Expr b);
Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(double c, Expr a);
Expr transpose(Expr a);
Expr inverse(Expr a);
Expr mse(Expr a, Expr b);

/// Makes the backward rule for `op` deliberately wrong (gradient scaled by
/// 1.5) in every graph of the process, or restores it with std::nullopt.
/// Exists so the gradient checker can be shown to catch a broken rule.
void set_backward_fault(std::optional<Op> op);
std::optional<Op> backward_fault();

struct GradCheckResult {
  double max_relative_error = 0.0;
  /// Set when an inverse was too ill-conditioned for finite differences.
  bool skipped = false;
  std::string warning;
};

/// Central differences with step h over every parameter entry, compared to
/// backward(root). Relative error uses max(|analytic|, |numeric|, 1e-8).
/// Skipped with a warning if some inverse has condition number above 1e8.
GradCheckResult finite_diff_check(ExprGraph& graph, Expr root, double h = 1e-5);

/// Same comparison for an arbitrary loss over a flat parameter vector.
/// `floor` replaces 1e-8 in the denominator; large networks have entries
/// whose central differences are dominated by round-off near 1e-12.
GradCheckResult finite_diff_check(const std::function<double(const Eigen::VectorXd&)>& loss,
                                  const Eigen::VectorXd& params,
                                  const Eigen::VectorXd& analytic, double h = 1e-5,
                                  double floor = 1e-8);

}  // namespace grlt
