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

#include "grlt/losses.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/QR>

#include "grlt/errors.hpp"

namespace grlt {

namespace {

void check_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError(std::string(what) + ": prediction is " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + ", target is " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& m, int p) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(m.rows(), m.cols());
  for (int k = 0; k < p; ++k) out = out * m;
  return out;
}

Expr expr_power(Expr m, int p, Expr identity) {
  if (p == 0) return identity;
  Expr out = m;
  for (int k = 1; k < p; ++k) out = out * m;
  return out;
}

void check_batch(const ActedBatch& b) {
  if (b.x.rows() == 0) throw ContractError("empty batch");
  if (b.x.rows() != b.gx.rows() || b.x.cols() != b.gx.cols())
    throw ShapeError("acted inputs do not match the batch shape");
  if (b.y.rows() != b.gy.rows() || b.y.cols() != b.gy.cols())
    throw ShapeError("acted targets do not match the target shape");
  if (b.y.rows() != b.x.rows()) throw ShapeError("input and target counts differ");
}

// Decoder pass on latent codes: task value, decoder gradient and dLoss/dZ.
struct DecodeStep {
  TaskLoss loss;
  NetGradients grads;
};

DecodeStep decode(const DenseNet& decoder, const Eigen::MatrixXd& z, const Eigen::MatrixXd& target,
                  TaskKind task) {
  const Tape tape = decoder.forward(z);
  DecodeStep step;
  step.loss = task_loss(task, tape.output, target);
  step.grads = decoder.backward(tape, step.loss.grad);
  return step;
}

}  // namespace

const char* task_kind_name(TaskKind kind) {
  return kind == TaskKind::mse_autoencoder ? "mse_autoencoder" : "cross_entropy_classifier";
}

TaskKind parse_task_kind(const std::string& name) {
  if (name == "mse_autoencoder" || name == "mse") return TaskKind::mse_autoencoder;
  if (name == "cross_entropy_classifier" || name == "cross_entropy")
    return TaskKind::cross_entropy_classifier;
  throw ConfigError("unknown task '" + name +
                    "' (expected mse_autoencoder or cross_entropy_classifier)");
}

TaskLoss mse_task_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target) {
  check_same_shape(pred, target, "mse task loss");
  const double n = static_cast<double>(pred.size());
  TaskLoss out;
  const Eigen::MatrixXd diff = pred - target;
  out.value = diff.squaredNorm() / n;
  out.grad = (2.0 / n) * diff;
  return out;
}

TaskLoss cross_entropy_task_loss(const Eigen::MatrixXd& logits, const Eigen::MatrixXd& onehot) {
  check_same_shape(logits, onehot, "cross-entropy task loss");
  const double batch = static_cast<double>(logits.rows());
  TaskLoss out;
  out.grad.resize(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double top = logits.row(i).maxCoeff();
    const Eigen::RowVectorXd e = (logits.row(i).array() - top).exp().matrix();
    const double sum = e.sum();
    const double log_sum = std::log(sum) + top;
    out.value -= (onehot.row(i).array() * (logits.row(i).array() - log_sum)).sum();
    out.grad.row(i) = e / sum - onehot.row(i);
  }
  out.value /= batch;
  out.grad /= batch;
  return out;
}

TaskLoss task_loss(TaskKind kind, const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target) {
  return kind == TaskKind::mse_autoencoder ? mse_task_loss(pred, target)
                                           : cross_entropy_task_loss(pred, target);
}

void LossWeights::validate() const {
  const std::pair<const char*, double> all[] = {
      {"lambda_t", lambda_t}, {"lambda_e", lambda_e}, {"lambda_a", lambda_a}, {"lambda", lambda}};
  for (const auto& [name, v] : all)
    if (!std::isfinite(v) || v < 0)
      throw ConfigError(std::string("loss weight ") + name + " must be finite and non-negative");
}

Expr BoundAction::word(const Word& w) const {
  Expr out = identity;
  bool first = true;
  for (const Letter& l : w.letters()) {
    if (l.generator < 0 || l.generator >= static_cast<int>(generators.size()))
      throw ConfigError("word uses generator " + std::to_string(l.generator) +
                        " but the action has " + std::to_string(generators.size()));
    const Expr base = l.exponent < 0 ? inverse(generators[l.generator]) : generators[l.generator];
    const Expr p = expr_power(base, std::abs(l.exponent), identity);
    out = first ? p : out * p;
    first = false;
  }
  return out;
}

Expr BoundAction::element(const Group& group, Element g) const { return word(group.word_for(g)); }

Eigen::VectorXd BoundAction::flat_grad() const {
  Eigen::Index n = 0;
  for (std::size_t k = 0; k < generators.size(); ++k)
    if (free[k]) n += static_cast<Eigen::Index>(dim) * dim;
  Eigen::VectorXd out(n);
  Eigen::Index at = 0;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    if (!free[k]) continue;
    out.segment(at, static_cast<Eigen::Index>(dim) * dim) = graph->grad(generators[k]).reshaped();
    at += static_cast<Eigen::Index>(dim) * dim;
  }
  return out;
}

const char* action_init_name(ActionInit init) {
  return init == ActionInit::orthogonal ? "orthogonal" : "near_identity";
}

ActionInit parse_action_init(const std::string& name) {
  if (name == "near_identity") return ActionInit::near_identity;
  if (name == "orthogonal") return ActionInit::orthogonal;
  throw ConfigError("unknown action init '" + name + "' (expected near_identity or orthogonal)");
}

LearnedAction::LearnedAction(GroupPtr group, int dim, std::uint64_t seed, ActionInit init)
    : group_(std::move(group)), dim_(dim) {
  if (dim_ < 1) throw ConfigError("learned action dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = 0.1 / std::sqrt(static_cast<double>(dim_));
  for (Element gen : group_->generators()) {
    const bool is_free = gen != Group::identity();
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim_, dim_);
    if (is_free && init == ActionInit::near_identity) {
      for (Eigen::Index k = 0; k < m.size(); ++k) m(k) += scale * normal(rng);
    } else if (is_free) {
      Eigen::MatrixXd a(dim_, dim_);
      for (Eigen::Index k = 0; k < a.size(); ++k) a(k) = normal(rng);
      const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
      const Eigen::MatrixXd q = qr.householderQ();
      // Sign fix on R's diagonal makes Q Haar distributed.
      m = q * qr.matrixQR().diagonal().cwiseSign().asDiagonal();
    }
    matrices_.push_back(std::move(m));
    free_.push_back(is_free);
  }
}

void LearnedAction::set_matrix(int generator, const Eigen::MatrixXd& m) {
  if (m.rows() != dim_ || m.cols() != dim_) throw ShapeError("generator matrix must be dim x dim");
  if (!free_.at(generator)) throw ContractError("generator " + std::to_string(generator) + " is fixed");
  matrices_[generator] = m;
}

Eigen::Index LearnedAction::parameter_count() const {
  Eigen::Index n = 0;
  for (bool f : free_)
    if (f) n += static_cast<Eigen::Index>(dim_) * dim_;
  return n;
}

Eigen::VectorXd LearnedAction::parameters() const {
  Eigen::VectorXd out(parameter_count());
  Eigen::Index at = 0;
  for (std::size_t k = 0; k < matrices_.size(); ++k) {
    if (!free_[k]) continue;
    out.segment(at, matrices_[k].size()) = matrices_[k].reshaped();
    at += matrices_[k].size();
  }
  return out;
}

void LearnedAction::set_parameters(const Eigen::Ref<const Eigen::VectorXd>& flat) {
  if (flat.size() != parameter_count())
    throw ShapeError("expected " + std::to_string(parameter_count()) + " action parameters, got " +
                     std::to_string(flat.size()));
  Eigen::Index at = 0;
  for (std::size_t k = 0; k < matrices_.size(); ++k) {
    if (!free_[k]) continue;
    matrices_[k].reshaped() = flat.segment(at, matrices_[k].size());
    at += matrices_[k].size();
  }
}

Eigen::MatrixXd LearnedAction::word_matrix(const Word& w) const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(dim_, dim_);
  for (const Letter& l : w.letters()) {
    if (l.generator < 0 || l.generator >= generator_count())
      throw ConfigError("word uses generator " + std::to_string(l.generator) +
                        " but the action has " + std::to_string(generator_count()));
    Eigen::MatrixXd base = matrices_[l.generator];
    if (l.exponent < 0) base = base.partialPivLu().inverse();
    out = out * matrix_power(base, std::abs(l.exponent));
  }
  return out;
}

std::vector<Eigen::MatrixXd> LearnedAction::element_matrices() const {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(group_->order());
  for (Element g = 0; g < group_->order(); ++g) out.push_back(word_matrix(group_->word_for(g)));
  return out;
}

BoundAction LearnedAction::bind(ExprGraph& graph) const {
  BoundAction b;
  b.graph = &graph;
  b.dim = dim_;
  b.identity = graph.identity(dim_);
  for (std::size_t k = 0; k < matrices_.size(); ++k) {
    b.generators.push_back(free_[k] ? graph.parameter(matrices_[k], "generator" + std::to_string(k))
                                    : b.identity);
    b.free.push_back(free_[k]);
  }
  return b;
}

Expr algebra_loss(const Group& group, const BoundAction& action) {
  if (static_cast<int>(action.generators.size()) != static_cast<int>(group.generators().size()))
    throw ConfigError("action and group disagree on the number of generators");
  Expr total;
  for (const Word& r : group.relators()) {
    const Expr term = mse(action.word(r), action.identity);
    total = total.valid() ? total + term : term;
  }
  if (!total.valid()) total = mse(action.identity, action.identity);
  return total;
}

std::string Regulariser::describe() const {
  std::ostringstream ss;
  if (kind == Kind::inverse_consistency) {
    ss << "inverse_consistency(g" << generator << ", " << power << ")";
  } else {
    ss << "damped_relator(";
    for (const Letter& l : word.letters()) ss << 'g' << l.generator << '^' << l.exponent << ' ';
    ss << coefficient << ")";
  }
  return ss.str();
}

Expr regulariser_expr(const BoundAction& action, const Regulariser& reg) {
  if (reg.kind == Regulariser::Kind::inverse_consistency) {
    if (reg.generator < 0 || reg.generator >= static_cast<int>(action.generators.size()) ||
        !action.free[reg.generator])
      throw ConfigError("regulariser " + reg.describe() + " needs a trainable generator");
    if (reg.power < 0) throw ConfigError("regulariser power must be non-negative");
    const Expr g = action.generators[reg.generator];
    return mse(expr_power(g, reg.power, action.identity), inverse(g));
  }
  return reg.coefficient * mse(action.word(reg.word), action.identity);
}

std::vector<Regulariser> default_regularisers(const GroupSpec& spec) {
  Regulariser r;
  if (spec.kind == GroupSpec::Kind::dihedral && spec.n == 1) {
    r.kind = Regulariser::Kind::inverse_consistency;
    r.generator = 0;
    r.power = 1;
    return {r};
  }
  if (spec.kind == GroupSpec::Kind::dihedral && spec.n == 3) {
    r.kind = Regulariser::Kind::damped_relator;
    r.word = Word{{0, 1}, {1, 1}, {0, 1}, {1, 1}};
    r.coefficient = -0.995;
    return {r};
  }
  if (spec.kind == GroupSpec::Kind::cyclic && spec.n == 4) {
    r.kind = Regulariser::Kind::inverse_consistency;
    r.generator = 0;
    r.power = 3;
    return {r};
  }
  return {};
}

double equivariance_latent_loss(const DenseNet& encoder, const Eigen::MatrixXd& latent_action,
                                const Eigen::MatrixXd& x, const Eigen::MatrixXd& gx) {
  if (latent_action.rows() != encoder.output_dim() || latent_action.cols() != encoder.output_dim())
    throw ShapeError("latent action is " + std::to_string(latent_action.rows()) + "x" +
                     std::to_string(latent_action.cols()) + " but the encoder outputs " +
                     std::to_string(encoder.output_dim()) + " coordinates");
  if (x.rows() == 0) throw ContractError("empty batch");
  const Eigen::MatrixXd z = encoder.predict(x);
  const Eigen::MatrixXd zg = encoder.predict(gx);
  return (zg - z * latent_action.transpose()).squaredNorm() / static_cast<double>(zg.size());
}

LossResult l_opt(const DenseNet& encoder, const DenseNet& decoder, const LearnedAction& action,
                 const std::vector<Regulariser>& regularisers, const ActedBatch& batch,
                 const LossWeights& w, TaskKind task) {
  w.validate();
  check_batch(batch);
  if (action.dim() != encoder.output_dim())
    throw ShapeError("learned action dimension " + std::to_string(action.dim()) +
                     " differs from the latent dimension " + std::to_string(encoder.output_dim()));
  const Tape tx = encoder.forward(batch.x);
  const Tape tgx = encoder.forward(batch.gx);

  ExprGraph graph;
  const BoundAction bound = action.bind(graph);
  const Expr z = graph.parameter(tx.output, "Z");
  const Expr zg = graph.parameter(tgx.output, "Zg");
  const Expr zt = z * transpose(bound.element(action.group(), batch.g));
  const Expr equiv = mse(zt, zg);
  const Expr alg = algebra_loss(action.group(), bound);
  Expr reg;
  if (w.lambda_a > 0)
    for (const Regulariser& r : regularisers) {
      const Expr term = regulariser_expr(bound, r);
      reg = reg.valid() ? reg + term : term;
    }
  Expr root;
  auto add_term = [&root](Expr term) { root = root.valid() ? root + term : term; };
  if (w.lambda_e > 0) add_term(w.lambda_e * equiv);
  if (w.lambda_a > 0) add_term(w.lambda_a * (reg.valid() ? alg + reg : alg));

  LossResult out;
  LossParts& parts = out.parts;
  parts.equivariance = graph.evaluate_scalar(equiv);
  parts.algebra = graph.evaluate_scalar(alg);
  if (reg.valid()) parts.regulariser = graph.evaluate_scalar(reg);
  const Eigen::MatrixXd zt_value = graph.evaluate(zt);
  if (root.valid()) graph.evaluate(root);

  const DecodeStep plain = decode(decoder, tx.output, batch.y, task);
  parts.task = plain.loss.value;
  out.grads.decoder = plain.grads.params;
  Eigen::MatrixXd dz = plain.grads.input;

  std::vector<std::pair<Expr, Eigen::MatrixXd>> seeds;
  if (root.valid()) seeds.emplace_back(root, Eigen::MatrixXd::Ones(1, 1));
  if (w.lambda_t > 0) {
    const DecodeStep shifted = decode(decoder, zt_value, batch.gy, task);
    parts.shifted_task = shifted.loss.value;
    out.grads.decoder += w.lambda_t * shifted.grads.params;
    seeds.emplace_back(zt, w.lambda_t * shifted.grads.input);
  } else {
    parts.shifted_task = task_loss(task, decoder.predict(zt_value), batch.gy).value;
  }

  Eigen::MatrixXd dzg = Eigen::MatrixXd::Zero(tgx.output.rows(), tgx.output.cols());
  if (!seeds.empty()) {
    graph.backward(seeds);
    dz += graph.grad(z);
    dzg = graph.grad(zg);
    out.grads.action = bound.flat_grad();
  } else {
    out.grads.action = Eigen::VectorXd::Zero(action.parameter_count());
  }
  out.grads.encoder = encoder.backward(tx, dz).params;
  if (!seeds.empty()) out.grads.encoder += encoder.backward(tgx, dzg).params;

  parts.total = parts.task + w.lambda_t * parts.shifted_task + w.lambda_e * parts.equivariance +
                w.lambda_a * (parts.algebra + parts.regulariser);
  return out;
}

LossResult augmented_loss(const DenseNet& encoder, const DenseNet& decoder,
                          const ActedBatch& batch, TaskKind task) {
  check_batch(batch);
  const Tape tx = encoder.forward(batch.x);
  const Tape tgx = encoder.forward(batch.gx);
  const DecodeStep a = decode(decoder, tx.output, batch.y, task);
  const DecodeStep b = decode(decoder, tgx.output, batch.gy, task);
  LossResult out;
  out.parts.task = a.loss.value;
  out.parts.shifted_task = b.loss.value;
  out.parts.total = 0.5 * a.loss.value + 0.5 * b.loss.value;
  out.grads.decoder = 0.5 * a.grads.params + 0.5 * b.grads.params;
  out.grads.encoder = encoder.backward(tx, 0.5 * a.grads.input).params +
                      encoder.backward(tgx, 0.5 * b.grads.input).params;
  return out;
}

LossResult method_loss(const DenseNet& encoder, const DenseNet& decoder,
                       const RealRepresentation& rho_z, const ActedBatch& batch, double lambda,
                       TaskKind task) {
  if (!std::isfinite(lambda) || lambda < 0)
    throw ConfigError("method strength lambda must be finite and non-negative");
  if (rho_z.dim() != encoder.output_dim())
    throw ShapeError("latent representation has dimension " + std::to_string(rho_z.dim()) +
                     " but the encoder outputs " + std::to_string(encoder.output_dim()));
  LossResult out = augmented_loss(encoder, decoder, batch, task);
  const Eigen::MatrixXd& p = rho_z[batch.g];
  const Tape tx = encoder.forward(batch.x);
  const Tape tgx = encoder.forward(batch.gx);
  const Eigen::MatrixXd diff = tgx.output - tx.output * p.transpose();
  const double n = static_cast<double>(diff.size());
  out.parts.equivariance = diff.squaredNorm() / n;
  if (lambda > 0) {
    out.parts.total += lambda * out.parts.equivariance;
    const Eigen::MatrixXd da = (2.0 * lambda / n) * diff;
    out.grads.encoder += encoder.backward(tgx, da).params;
    out.grads.encoder += encoder.backward(tx, -da * p).params;
  }
  return out;
}

LossResult plain_loss(const DenseNet& encoder, const DenseNet& decoder, const ActedBatch& batch,
                      TaskKind task) {
  check_batch(batch);
  const Tape tx = encoder.forward(batch.x);
  const DecodeStep a = decode(decoder, tx.output, batch.y, task);
  LossResult out;
  out.parts.task = a.loss.value;
  out.parts.total = a.loss.value;
  out.grads.decoder = a.grads.params;
  out.grads.encoder = encoder.backward(tx, a.grads.input).params;
  return out;
}

}  // namespace grlt
