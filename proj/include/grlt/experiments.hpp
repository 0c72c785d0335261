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
#include <functional>
#include <string>
#include <vector>

#include "grlt/adam.hpp"
#include "grlt/analysis.hpp"
#include "grlt/data.hpp"
#include "grlt/losses.hpp"
#include "grlt/nnet.hpp"

namespace grlt {

enum class ExperimentKind { learn_rep, method, baseline_augmented, baseline_plain };

const char* experiment_kind_name(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::learn_rep;
  std::string name = "run";
  std::uint64_t seed = 0;
  int steps = 2000;
  int batch_size = 64;

  std::string group = "c4";
  DatasetSpec dataset;

  std::vector<int> encoder_hidden = {32};
  std::vector<int> decoder_hidden = {32};
  Activation hidden_activation = Activation::relu;
  /// sigmoid suits the [0, 1] autoencoder targets; classifiers emit raw logits.
  Activation output_activation = Activation::sigmoid;
  int latent_dim = 16;
  /// Copies of the regular representation in the fixed latent action.
  int regular_copies = 1;
  ActionInit action_init = ActionInit::orthogonal;

  LossWeights weights;
  AdamOptions optimizer{.lr = 3e-3};

  std::string output_dir = "out";
  /// Grid axes for run_grid; an empty axis keeps the base value.
  std::vector<double> grid_lr;
  std::vector<double> grid_lambda;

  /// Throws ConfigError (CapacityError for a latent space too small for the
  /// fixed representation).
  void validate() const;
};

/// Desk defaults for a group: lr 3e-3, batch 64, 2000 steps and the per-group
/// loss weights (D1: 1.0/0.025/0.475, D3: 0.5/0.495/0.005, C4: 1.0/0.25/0.25
/// for lambda_a/lambda_t/lambda_e; lambda = 1 for the method).
ExperimentConfig default_config(const std::string& group);

/// Parses the JSON config format with sections experiment, group, dataset,
/// model, optimizer, loss_weights and output. Missing keys take the
/// group defaults; unknown keys throw ConfigError naming their path.
ExperimentConfig parse_config(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);

NetSpec encoder_spec(const ExperimentConfig& cfg, int input_dim);
NetSpec decoder_spec(const ExperimentConfig& cfg, int output_dim);

/// Trainable parameters of the run the config describes, without training.
Eigen::Index parameter_census(const ExperimentConfig& cfg);

/// Independent stream `stream` of the run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Optional per-step observer, called after every optimizer step with the
/// flat parameter vector.
using StepObserver = std::function<void(int step, const Eigen::VectorXd& params)>;

/// Joint training of encoder, decoder and learned action under l_opt.
/// Divergence (loss above 1e6 or non-finite) stops the run and sets
/// `diverged` with diagnostics; the partial report is returned.
RunReport run_learn_rep(const ExperimentConfig& cfg, const StepObserver& observer = {});

/// Fixed-representation method and its augmented and plain baselines.
RunReport run_method(const ExperimentConfig& cfg, const StepObserver& observer = {});

/// Dispatches on cfg.experiment.
RunReport run_experiment(const ExperimentConfig& cfg, const StepObserver& observer = {});

struct GridPoint {
  std::string label;
  ExperimentConfig config;
};

struct GridResult {
  std::vector<GridPoint> points;
  std::vector<RunReport> reports;
  /// Lowest held-out task loss; ties go to the earlier point.
  std::size_t best = 0;
};

std::vector<GridPoint> grid_points(const ExperimentConfig& base);

/// Runs every grid point, `parallel` at a time. Results are ordered as the
/// points regardless of scheduling.
GridResult run_grid(const ExperimentConfig& base, int parallel = 1);

struct BaselineComparison {
  double task_loss_delta = 0.0;
  /// baseline equivariance error / method equivariance error.
  double equivariance_ratio = 0.0;
  bool same_parameter_count = false;
};

BaselineComparison compare(const RunReport& method, const RunReport& baseline);

}  // namespace grlt
