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
#include <string>
#include <vector>

#include <Eigen/Core>

#include "grlt/group.hpp"
#include "grlt/matgrad.hpp"
#include "grlt/nnet.hpp"
#include "grlt/representation.hpp"

namespace grlt {

enum class TaskKind { mse_autoencoder, cross_entropy_classifier };

const char* task_kind_name(TaskKind kind);
TaskKind parse_task_kind(const std::string& name);

struct TaskLoss {
  double value = 0.0;
  /// dLoss/dPrediction.
  Eigen::MatrixXd grad;
};

/// Mean over all entries of (pred - target)^2.
TaskLoss mse_task_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target);
/// Softmax cross-entropy against one-hot rows, averaged over the batch.
/// The gradient is (softmax - onehot) / batch.
TaskLoss cross_entropy_task_loss(const Eigen::MatrixXd& logits, const Eigen::MatrixXd& onehot);
TaskLoss task_loss(TaskKind kind, const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target);

struct LossWeights {
  double lambda_t = 0.0;
  double lambda_e = 0.0;
  double lambda_a = 0.0;
  /// Strength of the latent equivariance term in the fixed-representation method.
  double lambda = 0.0;

  /// Throws ConfigError for negative or non-finite weights.
  void validate() const;
};

class LearnedAction;

/// A LearnedAction placed into an expression graph. Free generators are
/// parameter nodes; generators equal to the identity element are I.
struct BoundAction {
  ExprGraph* graph = nullptr;
  std::vector<Expr> generators;
  std::vector<bool> free;
  Expr identity;
  int dim = 0;

  /// Product of generator matrices along `w`; negative exponents use inverse nodes.
  Expr word(const Word& w) const;
  /// Image of a group element through its shortest positive word.
  Expr element(const Group& group, Element g) const;
  /// Gradients of the free generators, concatenated column-major.
  Eigen::VectorXd flat_grad() const;
};

enum class ActionInit {
  /// I + 0.1 * N(0, 1) / sqrt(dim).
  near_identity,
  /// Haar-random orthogonal: eigenvalues spread over the unit circle.
  orthogonal
};

const char* action_init_name(ActionInit init);
ActionInit parse_action_init(const std::string& name);

/// Trainable per-generator matrices for a linear group action on R^dim.
class LearnedAction {
 public:
  LearnedAction(GroupPtr group, int dim, std::uint64_t seed,
                ActionInit init = ActionInit::near_identity);

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  int dim() const { return dim_; }
  int generator_count() const { return static_cast<int>(matrices_.size()); }
  bool is_free(int generator) const { return free_.at(generator); }
  const Eigen::MatrixXd& matrix(int generator) const { return matrices_.at(generator); }
  void set_matrix(int generator, const Eigen::MatrixXd& m);

  Eigen::Index parameter_count() const;
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::Ref<const Eigen::VectorXd>& flat);

  /// Numeric value of a word over the current matrices.
  Eigen::MatrixXd word_matrix(const Word& w) const;
  /// One matrix per element, expanded through shortest positive words.
  std::vector<Eigen::MatrixXd> element_matrices() const;

  BoundAction bind(ExprGraph& graph) const;

 private:
  GroupPtr group_;
  int dim_;
  std::vector<Eigen::MatrixXd> matrices_;
  std::vector<bool> free_;
};

/// Sum over relators of mse(word matrix, I). Throws ConfigError when a
/// relator names a generator the action does not have.
Expr algebra_loss(const Group& group, const BoundAction& action);

struct Regulariser {
  enum class Kind { inverse_consistency, damped_relator };
  Kind kind = Kind::inverse_consistency;
  /// inverse_consistency: mse(rho(generator)^power, rho(generator)^-1).
  int generator = 0;
  int power = 1;
  /// damped_relator: coefficient * mse(rho(word), I).
  Word word;
  double coefficient = 1.0;

  std::string describe() const;
};

Expr regulariser_expr(const BoundAction& action, const Regulariser& reg);

/// Stabilising terms registered for D1, D3 and C4; empty for other groups.
std::vector<Regulariser> default_regularisers(const GroupSpec& spec);

/// mse(E(gx), E(x) M^T) for a latent action matrix M, over batch and coordinates.
double equivariance_latent_loss(const DenseNet& encoder, const Eigen::MatrixXd& latent_action,
                                const Eigen::MatrixXd& x, const Eigen::MatrixXd& gx);

/// One batch and a sampled element, with the acted copies precomputed.
struct ActedBatch {
  Eigen::MatrixXd x, y;    // rows are examples
  Eigen::MatrixXd gx, gy;  // rho_X(g) x and rho_Y(g) y
  Element g = 0;
};

struct LossParts {
  double task = 0.0;
  double shifted_task = 0.0;
  double equivariance = 0.0;
  double algebra = 0.0;
  double regulariser = 0.0;
  double total = 0.0;
};

struct LossGradients {
  Eigen::VectorXd encoder, decoder, action;
};

struct LossResult {
  LossParts parts;
  LossGradients grads;
};

/// Task + lambda_t * shifted task + lambda_e * latent equivariance
/// + lambda_a * (algebra + regularisers), all through the learned action.
/// Terms with zero weight are reported but excluded from the gradient.
LossResult l_opt(const DenseNet& encoder, const DenseNet& decoder, const LearnedAction& action,
                 const std::vector<Regulariser>& regularisers, const ActedBatch& batch,
                 const LossWeights& w, TaskKind task);

/// 1/2 task + 1/2 shifted task + lambda * mse(E(gx), E(x) rho_Z(g)^T).
/// No parameters besides the encoder and decoder. With lambda = 0 this is
/// exactly augmented_loss.
LossResult method_loss(const DenseNet& encoder, const DenseNet& decoder,
                       const RealRepresentation& rho_z, const ActedBatch& batch, double lambda,
                       TaskKind task);

/// 1/2 task + 1/2 shifted task (G-augmented training).
LossResult augmented_loss(const DenseNet& encoder, const DenseNet& decoder,
                          const ActedBatch& batch, TaskKind task);

/// Task loss on the unacted batch only.
LossResult plain_loss(const DenseNet& encoder, const DenseNet& decoder, const ActedBatch& batch,
                      TaskKind task);

}  // namespace grlt
