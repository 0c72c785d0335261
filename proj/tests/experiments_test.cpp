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

#include <random>

#include <gtest/gtest.h>

#include "grlt/errors.hpp"
#include "grlt/experiments.hpp"

namespace grlt {
namespace {

ExperimentConfig quick(const std::string& group, ExperimentKind kind, int steps = 40) {
  ExperimentConfig cfg = default_config(group);
  cfg.experiment = kind;
  cfg.steps = steps;
  cfg.dataset.n = 120;
  return cfg;
}

std::vector<Eigen::VectorXd> trajectory(const ExperimentConfig& cfg) {
  std::vector<Eigen::VectorXd> out;
  run_experiment(cfg, [&](int, const Eigen::VectorXd& p) { out.push_back(p); });
  return out;
}

TEST(ConfigTest, DefaultsFollowGroup) {
  const ExperimentConfig d1 = default_config("d1");
  EXPECT_EQ(d1.dataset.kind, "d1_pairswap");
  EXPECT_EQ(d1.latent_dim, 10);
  EXPECT_DOUBLE_EQ(d1.weights.lambda_a, 1.0);
  EXPECT_DOUBLE_EQ(d1.weights.lambda_t, 0.025);
  EXPECT_DOUBLE_EQ(d1.weights.lambda_e, 0.475);
  const ExperimentConfig d3 = default_config("d3");
  EXPECT_EQ(d3.latent_dim, 12);
  EXPECT_DOUBLE_EQ(d3.weights.lambda_a, 0.5);
  EXPECT_DOUBLE_EQ(d3.weights.lambda_t, 0.495);
  EXPECT_DOUBLE_EQ(d3.weights.lambda_e, 0.005);
  const ExperimentConfig c4 = default_config("c4");
  EXPECT_EQ(c4.dataset.kind, "c4_autoencode");
  EXPECT_EQ(c4.latent_dim, 16);
  EXPECT_DOUBLE_EQ(c4.optimizer.lr, 3e-3);
  EXPECT_EQ(c4.batch_size, 64);
  EXPECT_EQ(c4.steps, 2000);
  EXPECT_EQ(c4.action_init, ActionInit::orthogonal);
}

TEST(ConfigTest, ParsesSections) {
  const ExperimentConfig cfg = parse_config(R"({
    "experiment": {"kind": "method", "name": "m", "seed": 7, "steps": 12, "batch_size": 8,
                   "grid": {"lr": [0.001, 0.003], "lambda": [0.5, 1]}},
    "group": "c4",
    "dataset": {"kind": "c4_autoencode", "n": 50, "size": 6},
    "model": {"encoder_hidden": [16, 8], "decoder_hidden": [8], "activation": "gelu",
              "latent_dim": 8, "regular_copies": 2, "action_init": "near_identity"},
    "optimizer": {"lr": 0.01, "beta1": 0.8},
    "loss_weights": {"lambda": 1.5},
    "output": {"dir": "results"}
  })");
  EXPECT_EQ(cfg.experiment, ExperimentKind::method);
  EXPECT_EQ(cfg.name, "m");
  EXPECT_EQ(cfg.seed, 7u);
  EXPECT_EQ(cfg.steps, 12);
  EXPECT_EQ(cfg.batch_size, 8);
  EXPECT_EQ(cfg.grid_lr, (std::vector<double>{0.001, 0.003}));
  EXPECT_EQ(cfg.dataset.n, 50);
  EXPECT_EQ(cfg.encoder_hidden, (std::vector<int>{16, 8}));
  EXPECT_EQ(cfg.hidden_activation, Activation::gelu);
  EXPECT_EQ(cfg.regular_copies, 2);
  EXPECT_EQ(cfg.action_init, ActionInit::near_identity);
  EXPECT_DOUBLE_EQ(cfg.optimizer.lr, 0.01);
  EXPECT_DOUBLE_EQ(cfg.optimizer.beta1, 0.8);
  EXPECT_DOUBLE_EQ(cfg.weights.lambda, 1.5);
  EXPECT_DOUBLE_EQ(cfg.weights.lambda_t, 0.25);
  EXPECT_EQ(cfg.output_dir, "results");
}

TEST(ConfigTest, GroupObjectFormPicksDefaults) {
  const ExperimentConfig cfg = parse_config(R"({"group": {"spec": "d3"}})");
  EXPECT_EQ(cfg.dataset.kind, "d3_blocks");
  EXPECT_EQ(parse_config(R"({"group": "d3", "dataset": {"kind": "d3_blocks_classify"}})").output_activation,
            Activation::none);
}

TEST(ConfigTest, UnknownKeysNameTheirPath) {
  try {
    parse_config(R"({"model": {"latent_dims": 4}})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("model.latent_dims"), std::string::npos);
  }
  EXPECT_THROW(parse_config(R"({"extra": 1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"experiment": {"grid": {"mu": [1]}}})"), ConfigError);
}

TEST(ConfigTest, RejectsBadValues) {
  EXPECT_THROW(parse_config("{"), ConfigError);
  EXPECT_THROW(parse_config(R"({"experiment": {"steps": "many"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"experiment": {"steps": 0}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"experiment": {"seed": -1}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"experiment": {"kind": "other"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"model": {"activation": "tanh"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"model": {"action_init": "zero"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"loss_weights": {"lambda": -1}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"group": "c4", "dataset": {"kind": "d1_pairswap"}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"group": "c5"})"), ConfigError);
}

TEST(ConfigTest, CapacityRuleForFixedRepresentation) {
  try {
    parse_config(R"({"experiment": {"kind": "method"}, "group": "c4", "model": {"latent_dim": 3}})");
    FAIL();
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("regular representation"), std::string::npos);
  }
  EXPECT_NO_THROW(parse_config(R"({"group": "c4", "model": {"latent_dim": 3}})"));
}

TEST(ConfigTest, JsonRoundTrip) {
  ExperimentConfig cfg = default_config("d3");
  cfg.experiment = ExperimentKind::baseline_plain;
  cfg.seed = 99;
  cfg.grid_lambda = {0.5, 2.0};
  cfg.decoder_hidden = {5, 6};
  cfg.optimizer.weight_decay = 1e-4;
  const std::string text = config_to_json(cfg);
  EXPECT_EQ(config_to_json(parse_config(text)), text);
}

TEST(CensusTest, MethodMatchesBaselines) {
  ExperimentConfig cfg = default_config("c4");
  cfg.experiment = ExperimentKind::method;
  const Eigen::Index method = parameter_census(cfg);
  cfg.experiment = ExperimentKind::baseline_augmented;
  EXPECT_EQ(parameter_census(cfg), method);
  cfg.experiment = ExperimentKind::baseline_plain;
  EXPECT_EQ(parameter_census(cfg), method);
  // 64-32-16 encoder and 16-32-64 decoder.
  EXPECT_EQ(method, (64 * 32 + 32) + (32 * 16 + 16) + (16 * 32 + 32) + (32 * 64 + 64));
  cfg.experiment = ExperimentKind::learn_rep;
  EXPECT_EQ(parameter_census(cfg), method + 16 * 16);
}

TEST(CensusTest, ReportedCountsAgree) {
  const RunReport m = run_method(quick("c4", ExperimentKind::method, 2));
  const RunReport b = run_method(quick("c4", ExperimentKind::baseline_augmented, 2));
  EXPECT_EQ(m.parameter_count, b.parameter_count);
  EXPECT_EQ(m.parameter_count, parameter_census(quick("c4", ExperimentKind::method)));
  EXPECT_TRUE(compare(m, b).same_parameter_count);
}

TEST(SeedTest, StreamsAreDistinctAndStable) {
  EXPECT_EQ(derive_seed(5, 1), derive_seed(5, 1));
  EXPECT_NE(derive_seed(5, 1), derive_seed(5, 2));
  EXPECT_NE(derive_seed(5, 1), derive_seed(6, 1));
}

TEST(LearnRepTest, ZeroWeightsLeaveActionAtInitialisation) {
  ExperimentConfig cfg = quick("d1", ExperimentKind::learn_rep);
  cfg.weights.lambda_a = cfg.weights.lambda_t = cfg.weights.lambda_e = 0.0;
  const Eigen::VectorXd init =
      LearnedAction(dihedral(1), cfg.latent_dim, derive_seed(cfg.seed, 3), cfg.action_init).parameters();
  const std::vector<Eigen::VectorXd> path = trajectory(cfg);
  ASSERT_EQ(path.size(), 40u);
  for (const Eigen::VectorXd& p : path) EXPECT_EQ(p.tail(init.size()), init);
  EXPECT_NE(path.front().head(10), path.back().head(10));
}

TEST(LearnRepTest, ReportCarriesSnapshotsAndTable) {
  const RunReport r = run_learn_rep(quick("c4", ExperimentKind::learn_rep, 20));
  EXPECT_FALSE(r.diverged);
  EXPECT_EQ(r.curves.size(), 20u);
  ASSERT_TRUE(r.has_irreducible);
  EXPECT_EQ(r.irreducible.irrep_names, (std::vector<std::string>{"+1", "+i", "-1", "-i"}));
  std::vector<int> steps;
  for (const EigenSnapshot& s : r.eigen_snapshots) steps.push_back(s.step);
  EXPECT_EQ(steps, (std::vector<int>{0, 1, 2, 4, 8, 16, 20}));
  for (const EigenSnapshot& s : r.eigen_snapshots) EXPECT_EQ(s.snap.eigenvalues.size(), 16);
  ASSERT_EQ(r.final_generators.size(), 1u);
  EXPECT_GT(r.equivariance_error, 0.0);
}

TEST(LearnRepTest, DivergenceStopsWithDiagnostics) {
  ExperimentConfig cfg = quick("d1", ExperimentKind::learn_rep, 200);
  cfg.optimizer.lr = 1e4;
  const RunReport r = run_learn_rep(cfg);
  EXPECT_TRUE(r.diverged);
  EXPECT_NE(r.diagnostics.find("step"), std::string::npos);
  EXPECT_LT(r.curves.size(), 200u);
  EXPECT_FALSE(r.has_irreducible);
}

TEST(MethodTest, ZeroLambdaReproducesAugmentedBaseline) {
  ExperimentConfig cfg = quick("c4", ExperimentKind::method);
  cfg.weights.lambda = 0.0;
  const std::vector<Eigen::VectorXd> a = trajectory(cfg);
  cfg.experiment = ExperimentKind::baseline_augmented;
  const std::vector<Eigen::VectorXd> b = trajectory(cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_TRUE((a[i].array() == b[i].array()).all()) << "step " << i;
}

TEST(MethodTest, PositiveLambdaChangesTrajectory) {
  ExperimentConfig cfg = quick("c4", ExperimentKind::method, 5);
  const std::vector<Eigen::VectorXd> a = trajectory(cfg);
  cfg.experiment = ExperimentKind::baseline_augmented;
  EXPECT_NE(a.back(), trajectory(cfg).back());
}

TEST(MethodTest, ClassificationVariantRuns) {
  ExperimentConfig cfg = quick("d3", ExperimentKind::method, 10);
  cfg.dataset.kind = "d3_blocks_classify";
  cfg.output_activation = Activation::none;
  const RunReport r = run_method(cfg);
  EXPECT_FALSE(r.diverged);
  EXPECT_GT(r.test_task_loss, 0.0);
  const Dataset ds = synth_dataset(cfg.dataset, derive_seed(cfg.seed, 0));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 8; ++i) {
    const ActedBatch b = sample_batch(ds, ds.train_count, 16, rng);
    EXPECT_EQ(b.gy, b.y);
  }
}

TEST(MethodTest, RejectsLearnRepConfig) {
  EXPECT_THROW(run_method(default_config("c4")), ConfigError);
  EXPECT_THROW(run_learn_rep(quick("c4", ExperimentKind::method)), ConfigError);
}

TEST(DeterminismTest, RerunGivesIdenticalCsv) {
  for (ExperimentKind kind : {ExperimentKind::learn_rep, ExperimentKind::method}) {
    const ExperimentConfig cfg = quick("c4", kind, 30);
    const RunReport a = run_experiment(cfg), b = run_experiment(cfg);
    EXPECT_EQ(curves_csv(a), curves_csv(b));
    EXPECT_EQ(eigen_snapshots_csv(a), eigen_snapshots_csv(b));
    EXPECT_EQ(a.test_task_loss, b.test_task_loss);
    if (a.has_irreducible)
      EXPECT_EQ(table_csv_row("r", a.irreducible), table_csv_row("r", b.irreducible));
  }
}

TEST(DeterminismTest, SeedChangesRun) {
  ExperimentConfig cfg = quick("c4", ExperimentKind::method, 10);
  const RunReport a = run_method(cfg);
  cfg.seed = 1;
  EXPECT_NE(curves_csv(a), curves_csv(run_method(cfg)));
}

TEST(GridTest, SingletonEqualsSingleRun) {
  const ExperimentConfig cfg = quick("c4", ExperimentKind::method, 15);
  const GridResult g = run_grid(cfg);
  ASSERT_EQ(g.reports.size(), 1u);
  EXPECT_EQ(g.best, 0u);
  EXPECT_EQ(curves_csv(g.reports[0]), curves_csv(run_method(cfg)));
}

TEST(GridTest, TwoByTwoIsReproducibleAndParallelSafe) {
  ExperimentConfig cfg = quick("c4", ExperimentKind::method, 15);
  cfg.grid_lr = {1e-3, 3e-3};
  cfg.grid_lambda = {0.0, 1.0};
  const std::vector<GridPoint> points = grid_points(cfg);
  ASSERT_EQ(points.size(), 4u);
  EXPECT_EQ(points[1].label, "lr=0.001,lambda=1");
  EXPECT_EQ(points[2].config.optimizer.lr, 3e-3);
  const GridResult serial = run_grid(cfg, 1);
  const GridResult parallel = run_grid(cfg, 3);
  ASSERT_EQ(serial.reports.size(), 4u);
  EXPECT_EQ(serial.best, parallel.best);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(curves_csv(serial.reports[i]), curves_csv(parallel.reports[i]));
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_LE(serial.reports[serial.best].test_task_loss, serial.reports[i].test_task_loss);
  EXPECT_THROW(run_grid(cfg, 0), ConfigError);
}

TEST(GridTest, DivergedPointsAreNotSelected) {
  ExperimentConfig cfg = quick("d1", ExperimentKind::learn_rep, 100);
  cfg.grid_lr = {1e4, 3e-3};
  const GridResult g = run_grid(cfg);
  EXPECT_TRUE(g.reports[0].diverged);
  EXPECT_EQ(g.best, 1u);
}

TEST(CompareTest, Deltas) {
  RunReport m, b;
  m.test_task_loss = 0.5;
  b.test_task_loss = 0.25;
  m.equivariance_error = 0.1;
  b.equivariance_error = 1.0;
  m.parameter_count = b.parameter_count = 10;
  const BaselineComparison c = compare(m, b);
  EXPECT_DOUBLE_EQ(c.task_loss_delta, 0.25);
  EXPECT_DOUBLE_EQ(c.equivariance_ratio, 10.0);
  EXPECT_TRUE(c.same_parameter_count);
}

}  // namespace
}  // namespace grlt
