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

#include "grlt/gradcheck.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <random>

#include "grlt/experiments.hpp"
#include "grlt/matgrad.hpp"

namespace grlt {

namespace {

// Thousands of parameters put some gradient entries near 1e-9, where central
// differences of an O(0.1) loss carry ~1e-12 of round-off.
constexpr double kNetworkFloor = 1e-6;

Eigen::MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index k = 0; k < m.size(); ++k) m(k) = n(rng);
  return m;
}

class Recorder {
 public:
  explicit Recorder(GradCheckSuite& suite) : suite_(suite) {}

  void run(const std::string& name, int points, const std::function<GradCheckResult(int)>& check) {
    GradCheckEntry e{name, points, 0, 0.0, true};
    for (int p = 0; p < points; ++p) {
      const GradCheckResult r = check(p);
      if (r.skipped) {
        ++e.skipped;
        continue;
      }
      e.worst = std::max(e.worst, r.max_relative_error);
    }
    e.pass = e.worst <= suite_.tolerance && e.skipped < points;
    suite_.pass = suite_.pass && e.pass;
    suite_.entries.push_back(e);
  }

 private:
  GradCheckSuite& suite_;
};

// One graph per rule. The matmul and mse checks use only their own op; the
// others reduce through mse, so a failure there is blamed on the rule only
// when mse itself is clean.
GradCheckResult rule_check(Op op, int point) {
  std::mt19937_64 rng(1000 + 17 * static_cast<int>(op) + point);
  ExprGraph g;
  const Eigen::Index d = 4;
  const Expr a = g.parameter(gaussian(rng, d, d), "A");
  const Expr target = g.constant(gaussian(rng, d, d));
  Expr root;
  switch (op) {
    case Op::matmul: {
      const Expr u = g.constant(gaussian(rng, 1, d));
      const Expr b = g.parameter(gaussian(rng, d, d), "B");
      const Expr v = g.constant(gaussian(rng, d, 1));
      root = u * (a * b) * v;
      break;
    }
    case Op::frobenius_mse: root = mse(a, target); break;
    case Op::add: root = mse(a + g.parameter(gaussian(rng, d, d), "B"), target); break;
    case Op::sub: root = mse(a - g.parameter(gaussian(rng, d, d), "B"), target); break;
    case Op::scale: root = mse(2.5 * a, target); break;
    case Op::transpose: root = mse(transpose(a), target); break;
    case Op::inverse: {
      const Eigen::MatrixXd well = 2.0 * Eigen::MatrixXd::Identity(d, d) + 0.3 * gaussian(rng, d, d);
      g.set_value(a, well);
      root = mse(inverse(a), target);
      break;
    }
    default: break;
  }
  return finite_diff_check(g, root);
}

ActedBatch acted(const Eigen::MatrixXd& x, const RealRepresentation& rx, Element e) {
  const Eigen::MatrixXd gx = x * rx[e].transpose();
  return {x, x, gx, gx, e};
}

struct LoptPoint {
  DenseNet enc, dec;
  LearnedAction action;
  std::vector<Regulariser> regs;
  ActedBatch batch;
  LossWeights w;
  TaskKind task;

  Eigen::VectorXd params() const {
    Eigen::VectorXd p(enc.parameter_count() + dec.parameter_count() + action.parameter_count());
    p << enc.parameters(), dec.parameters(), action.parameters();
    return p;
  }
  void set(const Eigen::VectorXd& p) {
    enc.set_parameters(p.head(enc.parameter_count()));
    dec.set_parameters(p.segment(enc.parameter_count(), dec.parameter_count()));
    action.set_parameters(p.tail(action.parameter_count()));
  }
  LossResult eval() const { return l_opt(enc, dec, action, regs, batch, w, task); }

  GradCheckResult check() const {
    const LossResult r = eval();
    Eigen::VectorXd analytic(params().size());
    analytic << r.grads.encoder, r.grads.decoder, r.grads.action;
    return finite_diff_check(
        [this](const Eigen::VectorXd& p) {
          LoptPoint copy = *this;
          copy.set(p);
          return copy.eval().parts.total;
        },
        params(), analytic);
  }
};

GradCheckResult net_pair_check(const DenseNet& enc, const DenseNet& dec,
                               const std::function<LossResult(const DenseNet&, const DenseNet&)>& loss,
                               double floor = 1e-8) {
  const LossResult r = loss(enc, dec);
  Eigen::VectorXd p(enc.parameter_count() + dec.parameter_count()), analytic(p.size());
  p << enc.parameters(), dec.parameters();
  analytic << r.grads.encoder, r.grads.decoder;
  return finite_diff_check(
      [&](const Eigen::VectorXd& q) {
        DenseNet e = enc, d = dec;
        e.set_parameters(q.head(e.parameter_count()));
        d.set_parameters(q.tail(d.parameter_count()));
        return loss(e, d).parts.total;
      },
      p, analytic, 1e-5, floor);
}

}  // namespace

GradCheckSuite run_gradcheck_suite(const GradCheckOptions& options) {
  GradCheckSuite suite;
  suite.tolerance = options.tolerance;
  Recorder rec(suite);
  const int lp = options.loss_points;

  const Op rules[] = {Op::frobenius_mse, Op::matmul, Op::add, Op::sub, Op::scale, Op::transpose, Op::inverse};
  for (Op op : rules) rec.run(std::string("rule:") + op_name(op), lp, [op](int p) { return rule_check(op, p); });
  const bool mse_clean = suite.entries.front().pass;
  for (std::size_t i = 0; i < std::size(rules); ++i) {
    if (!suite.entries[i].pass && (rules[i] == Op::frobenius_mse || mse_clean))
      suite.failing_rules.push_back(op_name(rules[i]));
  }

  const std::vector<GroupPtr> groups = {dihedral(1), dihedral(3), cyclic(4)};
  for (const GroupPtr& g : groups) {
    rec.run("algebra:" + g->name(), lp, [&](int p) {
      const LearnedAction a(g, 4, 200 + p, ActionInit::near_identity);
      ExprGraph graph;
      const BoundAction b = a.bind(graph);
      return finite_diff_check(graph, algebra_loss(*g, b));
    });
  }
  for (const GroupPtr& g : groups) {
    for (const Regulariser& reg : default_regularisers(g->spec())) {
      rec.run("regulariser:" + g->name() + ":" + reg.describe(), lp, [&](int p) {
        const LearnedAction a(g, 5, 300 + p, ActionInit::near_identity);
        ExprGraph graph;
        const BoundAction b = a.bind(graph);
        return finite_diff_check(graph, regulariser_expr(b, reg));
      });
    }
  }
  for (const GroupPtr& g : groups) {
    const RealRepresentation rx = latent_rep(g, 8, 1);
    rec.run("l_opt:" + g->name(), lp, [&](int p) {
      std::mt19937_64 rng(400 + p);
      const LoptPoint point{DenseNet::init(NetSpec::parse("8 -> 6:gelu"), 410 + p),
                            DenseNet::init(NetSpec::parse("6 -> 8:sigmoid"), 420 + p),
                            LearnedAction(g, 6, 430 + p, p % 2 ? ActionInit::orthogonal : ActionInit::near_identity),
                            default_regularisers(g->spec()),
                            acted(gaussian(rng, 5, 8), rx, static_cast<Element>(p % g->order())),
                            {0.3, 0.4, 0.7, 0.0},
                            TaskKind::mse_autoencoder};
      return point.check();
    });
  }
  {
    const GroupPtr g = dihedral(3);
    const RealRepresentation rx = latent_rep(g, 8, 1);
    rec.run("l_opt:D3:classifier", lp, [&](int p) {
      std::mt19937_64 rng(500 + p);
      const Eigen::MatrixXd x = gaussian(rng, 4, 8);
      Eigen::MatrixXd y = Eigen::MatrixXd::Zero(4, 3);
      for (int i = 0; i < 4; ++i) y(i, (i + p) % 3) = 1.0;
      const Element e = static_cast<Element>(p % g->order());
      const LoptPoint point{DenseNet::init(NetSpec::parse("8 -> 6:gelu"), 510 + p),
                            DenseNet::init(NetSpec::parse("6 -> 3:none"), 520 + p),
                            LearnedAction(g, 6, 530 + p, ActionInit::near_identity),
                            default_regularisers(g->spec()),
                            {x, y, x * rx[e].transpose(), y, e},
                            {0.5, 0.5, 0.5, 0.0},
                            TaskKind::cross_entropy_classifier};
      return point.check();
    });
  }
  {
    const GroupPtr g = cyclic(4);
    const RealRepresentation rx = latent_rep(g, 8, 2);
    const RealRepresentation rz = latent_rep(g, 6, 1);
    rec.run("method_loss:C4", lp, [&](int p) {
      std::mt19937_64 rng(600 + p);
      const ActedBatch batch = acted(gaussian(rng, 5, 8), rx, static_cast<Element>(p % 4));
      return net_pair_check(DenseNet::init(NetSpec::parse("8 -> 6:gelu"), 610 + p),
                            DenseNet::init(NetSpec::parse("6 -> 8:sigmoid"), 620 + p),
                            [&](const DenseNet& e, const DenseNet& d) {
                              return method_loss(e, d, rz, batch, 1.0, TaskKind::mse_autoencoder);
                            });
    });
  }

  if (options.networks) {
    for (const char* group : {"d1", "d3", "c4"}) {
      const ExperimentConfig cfg = default_config(group);
      const Dataset ds = synth_dataset({cfg.dataset.kind, 16, cfg.dataset.size}, 7);
      const RealRepresentation rz = latent_rep(ds.input_action.group_ptr(), cfg.latent_dim, 1);
      rec.run("network:" + cfg.dataset.kind, options.network_points, [&](int p) {
        std::mt19937_64 rng(700 + p);
        const ActedBatch batch = sample_batch(ds, ds.train_count, 8, rng);
        return net_pair_check(
            DenseNet::init(encoder_spec(cfg, static_cast<int>(ds.inputs.cols())), 710 + p),
            DenseNet::init(decoder_spec(cfg, static_cast<int>(ds.targets.cols())), 720 + p),
            [&](const DenseNet& e, const DenseNet& d) {
              return method_loss(e, d, rz, batch, 1.0, ds.task);
            },
            kNetworkFloor);
      });
    }
  }
  return suite;
}

std::string format_gradcheck(const GradCheckSuite& suite) {
  std::string out;
  char line[256];
  for (const GradCheckEntry& e : suite.entries) {
    std::snprintf(line, sizeof line, "%-48s points=%-3d skipped=%-2d worst=%.3e  %s\n", e.name.c_str(), e.points,
                  e.skipped, e.worst, e.pass ? "ok" : "FAIL");
    out += line;
  }
  for (const std::string& r : suite.failing_rules) out += "corrupted backward rule: " + r + "\n";
  std::snprintf(line, sizeof line, "gradcheck %s (tolerance %.0e)\n", suite.pass ? "PASS" : "FAIL", suite.tolerance);
  out += line;
  return out;
}

}  // namespace grlt
