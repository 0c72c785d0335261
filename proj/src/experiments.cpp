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

#include "grlt/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <thread>

#include <json.hpp>

#include "grlt/character_table.hpp"
#include "grlt/errors.hpp"
#include "grlt/octahedral.hpp"

namespace grlt {

namespace {

using json = nlohmann::json;

constexpr double kDivergenceLimit = 1e6;

// Dataset kind each group is trained on by default, and the group it implies.
struct GroupDefaults {
  const char* dataset;
  int size;
  int latent_dim;
  double lambda_a, lambda_t, lambda_e;
};

GroupDefaults defaults_for(const GroupSpec& spec) {
  const std::string name = spec.name();
  if (name == "D1") return {"d1_pairswap", 16, 10, 1.0, 0.025, 0.475};
  if (name == "D3") return {"d3_blocks", 8, 12, 0.5, 0.495, 0.005};
  if (name == "O") return {"s4_voxels", 4, 24, 1.0, 0.25, 0.25};
  return {"c4_autoencode", 8, 16, 1.0, 0.25, 0.25};
}

GroupPtr dataset_group(const std::string& kind) {
  if (kind == "c4_autoencode") return cyclic(4);
  if (kind == "d1_pairswap") return dihedral(1);
  if (kind == "d3_blocks" || kind == "d3_blocks_classify") return dihedral(3);
  if (kind == "s4_voxels") return octahedral_rotations().group;
  throw ConfigError("unknown dataset kind '" + kind + "'");
}

bool is_classification(const ExperimentConfig& cfg) { return cfg.dataset.kind == "d3_blocks_classify"; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool diverged(const LossParts& p, std::string& why) {
  const std::pair<const char*, double> parts[] = {
      {"task", p.task},       {"shifted_task", p.shifted_task}, {"equivariance", p.equivariance},
      {"algebra", p.algebra}, {"regulariser", p.regulariser},   {"total", p.total}};
  for (const auto& [name, v] : parts) {
    if (!std::isfinite(v) || std::abs(v) > kDivergenceLimit) {
      why = std::string(name) + " loss " + fmt("%.6e", v);
      return true;
    }
  }
  return false;
}

Eigen::VectorXd concat(std::initializer_list<const Eigen::VectorXd*> parts) {
  Eigen::Index n = 0;
  for (const auto* p : parts) n += p->size();
  Eigen::VectorXd out(n);
  Eigen::Index at = 0;
  for (const auto* p : parts) {
    out.segment(at, p->size()) = *p;
    at += p->size();
  }
  return out;
}

// ---- strict JSON reading ----

void check_keys(const json& obj, const std::string& section, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError("config section '" + section + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown config key '" + section + "." + key + "'");
  }
}

template <typename T>
void read(const json& obj, const std::string& section, const char* key, T& out) {
  if (!obj.contains(key)) return;
  const json& v = obj.at(key);
  const std::string path = section + "." + key;
  if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) throw ConfigError("config key '" + path + "' must be a string");
    out = v.get<std::string>();
  } else if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) throw ConfigError("config key '" + path + "' must be a number");
    out = v.get<double>();
  } else if constexpr (std::is_same_v<T, std::vector<int>> || std::is_same_v<T, std::vector<double>>) {
    if (!v.is_array()) throw ConfigError("config key '" + path + "' must be an array");
    out.clear();
    for (const json& e : v) {
      if (std::is_same_v<T, std::vector<int>> ? !e.is_number_integer() : !e.is_number())
        throw ConfigError("config key '" + path + "' has a non-numeric entry");
      out.push_back(e.get<typename T::value_type>());
    }
  } else {
    if (!v.is_number_integer()) throw ConfigError("config key '" + path + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.get<long long>() < 0 && !v.is_number_unsigned())
        throw ConfigError("config key '" + path + "' must be non-negative");
    }
    out = v.get<T>();
  }
}

void read_activation(const json& obj, const std::string& section, const char* key, Activation& out) {
  std::string name;
  read(obj, section, key, name);
  if (!name.empty()) out = parse_activation(name);
}

}  // namespace

const char* experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::learn_rep: return "learn_rep";
    case ExperimentKind::method: return "method";
    case ExperimentKind::baseline_augmented: return "baseline_augmented";
    case ExperimentKind::baseline_plain: return "baseline_plain";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (ExperimentKind k : {ExperimentKind::learn_rep, ExperimentKind::method,
                           ExperimentKind::baseline_augmented, ExperimentKind::baseline_plain})
    if (name == experiment_kind_name(k)) return k;
  throw ConfigError("unknown experiment kind '" + name +
                    "' (expected learn_rep, method, baseline_augmented or baseline_plain)");
}

void ExperimentConfig::validate() const {
  if (steps < 1) throw ConfigError("experiment.steps must be at least 1");
  if (batch_size < 1) throw ConfigError("experiment.batch_size must be at least 1");
  if (latent_dim < 1) throw ConfigError("model.latent_dim must be positive");
  if (regular_copies < 1) throw ConfigError("model.regular_copies must be at least 1");
  for (int h : encoder_hidden)
    if (h < 1) throw ConfigError("model.encoder_hidden sizes must be positive");
  for (int h : decoder_hidden)
    if (h < 1) throw ConfigError("model.decoder_hidden sizes must be positive");
  if (dataset.n < 2) throw ConfigError("dataset.n must be at least 2");
  if (dataset.size < 1) throw ConfigError("dataset.size must be positive");
  weights.validate();
  Adam(1, optimizer);
  for (double lr : grid_lr)
    if (!(lr > 0)) throw ConfigError("experiment.grid.lr entries must be positive");
  for (double l : grid_lambda)
    if (!(l >= 0) || !std::isfinite(l)) throw ConfigError("experiment.grid.lambda entries must be non-negative");
  const GroupPtr g = build_group(GroupSpec::parse(group));
  if (!same_group(*g, *dataset_group(dataset.kind)))
    throw ConfigError("dataset '" + dataset.kind + "' is not acted on by group " + g->name());
  if (experiment != ExperimentKind::learn_rep && latent_dim < regular_copies * g->order())
    throw CapacityError("latent_dim " + std::to_string(latent_dim) + " cannot hold " +
                        std::to_string(regular_copies) + " copies of the regular representation of " +
                        g->name() + " (order " + std::to_string(g->order()) +
                        "); the fixed latent action needs at least one regular copy");
}

ExperimentConfig default_config(const std::string& group) {
  const GroupSpec spec = GroupSpec::parse(group);
  const GroupDefaults d = defaults_for(spec);
  ExperimentConfig cfg;
  cfg.group = group;
  cfg.dataset = DatasetSpec{d.dataset, 1000, d.size};
  cfg.latent_dim = d.latent_dim;
  cfg.weights = LossWeights{.lambda_t = d.lambda_t, .lambda_e = d.lambda_e, .lambda_a = d.lambda_a, .lambda = 1.0};
  return cfg;
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "<root>",
             {"experiment", "group", "dataset", "model", "optimizer", "loss_weights", "output"});
  const json empty = json::object();
  auto section = [&](const char* name) -> const json& { return root.contains(name) ? root.at(name) : empty; };

  std::string group = "c4";
  const json& g = section("group");
  if (g.is_string()) {
    group = g.get<std::string>();
  } else {
    check_keys(g, "group", {"spec"});
    read(g, "group", "spec", group);
  }
  ExperimentConfig cfg = default_config(group);

  const json& e = section("experiment");
  check_keys(e, "experiment", {"kind", "name", "seed", "steps", "batch_size", "grid"});
  std::string kind = experiment_kind_name(cfg.experiment);
  read(e, "experiment", "kind", kind);
  cfg.experiment = parse_experiment_kind(kind);
  read(e, "experiment", "name", cfg.name);
  read(e, "experiment", "seed", cfg.seed);
  read(e, "experiment", "steps", cfg.steps);
  read(e, "experiment", "batch_size", cfg.batch_size);
  if (e.contains("grid")) {
    const json& grid = e.at("grid");
    check_keys(grid, "experiment.grid", {"lr", "lambda"});
    read(grid, "experiment.grid", "lr", cfg.grid_lr);
    read(grid, "experiment.grid", "lambda", cfg.grid_lambda);
  }

  const json& d = section("dataset");
  check_keys(d, "dataset", {"kind", "n", "size"});
  read(d, "dataset", "kind", cfg.dataset.kind);
  read(d, "dataset", "n", cfg.dataset.n);
  read(d, "dataset", "size", cfg.dataset.size);
  if (is_classification(cfg)) cfg.output_activation = Activation::none;

  const json& m = section("model");
  check_keys(m, "model", {"encoder_hidden", "decoder_hidden", "activation", "output_activation",
                          "latent_dim", "regular_copies", "action_init"});
  read(m, "model", "encoder_hidden", cfg.encoder_hidden);
  read(m, "model", "decoder_hidden", cfg.decoder_hidden);
  read_activation(m, "model", "activation", cfg.hidden_activation);
  read_activation(m, "model", "output_activation", cfg.output_activation);
  read(m, "model", "latent_dim", cfg.latent_dim);
  read(m, "model", "regular_copies", cfg.regular_copies);
  std::string init = action_init_name(cfg.action_init);
  read(m, "model", "action_init", init);
  cfg.action_init = parse_action_init(init);

  const json& o = section("optimizer");
  check_keys(o, "optimizer", {"lr", "beta1", "beta2", "eps", "weight_decay"});
  read(o, "optimizer", "lr", cfg.optimizer.lr);
  read(o, "optimizer", "beta1", cfg.optimizer.beta1);
  read(o, "optimizer", "beta2", cfg.optimizer.beta2);
  read(o, "optimizer", "eps", cfg.optimizer.eps);
  read(o, "optimizer", "weight_decay", cfg.optimizer.weight_decay);

  const json& w = section("loss_weights");
  check_keys(w, "loss_weights", {"lambda_t", "lambda_e", "lambda_a", "lambda"});
  read(w, "loss_weights", "lambda_t", cfg.weights.lambda_t);
  read(w, "loss_weights", "lambda_e", cfg.weights.lambda_e);
  read(w, "loss_weights", "lambda_a", cfg.weights.lambda_a);
  read(w, "loss_weights", "lambda", cfg.weights.lambda);

  const json& out = section("output");
  check_keys(out, "output", {"dir"});
  read(out, "output", "dir", cfg.output_dir);

  cfg.validate();
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = {{"kind", experiment_kind_name(cfg.experiment)},
                     {"name", cfg.name},
                     {"seed", cfg.seed},
                     {"steps", cfg.steps},
                     {"batch_size", cfg.batch_size},
                     {"grid", {{"lr", cfg.grid_lr}, {"lambda", cfg.grid_lambda}}}};
  j["group"] = {{"spec", cfg.group}};
  j["dataset"] = {{"kind", cfg.dataset.kind}, {"n", cfg.dataset.n}, {"size", cfg.dataset.size}};
  j["model"] = {{"encoder_hidden", cfg.encoder_hidden},
                {"decoder_hidden", cfg.decoder_hidden},
                {"activation", activation_name(cfg.hidden_activation)},
                {"output_activation", activation_name(cfg.output_activation)},
                {"latent_dim", cfg.latent_dim},
                {"regular_copies", cfg.regular_copies},
                {"action_init", action_init_name(cfg.action_init)}};
  j["optimizer"] = {{"lr", cfg.optimizer.lr},
                    {"beta1", cfg.optimizer.beta1},
                    {"beta2", cfg.optimizer.beta2},
                    {"eps", cfg.optimizer.eps},
                    {"weight_decay", cfg.optimizer.weight_decay}};
  j["loss_weights"] = {{"lambda_t", cfg.weights.lambda_t},
                       {"lambda_e", cfg.weights.lambda_e},
                       {"lambda_a", cfg.weights.lambda_a},
                       {"lambda", cfg.weights.lambda}};
  j["output"] = {{"dir", cfg.output_dir}};
  return j.dump(2) + "\n";
}

NetSpec encoder_spec(const ExperimentConfig& cfg, int input_dim) {
  NetSpec spec{input_dim, {}};
  for (int h : cfg.encoder_hidden) spec.layers.push_back({h, cfg.hidden_activation});
  spec.layers.push_back({cfg.latent_dim, Activation::none});
  return spec;
}

NetSpec decoder_spec(const ExperimentConfig& cfg, int output_dim) {
  NetSpec spec{cfg.latent_dim, {}};
  for (int h : cfg.decoder_hidden) spec.layers.push_back({h, cfg.hidden_activation});
  spec.layers.push_back({output_dim, cfg.output_activation});
  return spec;
}

Eigen::Index parameter_census(const ExperimentConfig& cfg) {
  cfg.validate();
  const Dataset probe = synth_dataset({cfg.dataset.kind, 2, cfg.dataset.size}, 0);
  Eigen::Index n = DenseNet(encoder_spec(cfg, static_cast<int>(probe.inputs.cols()))).parameter_count() +
                   DenseNet(decoder_spec(cfg, static_cast<int>(probe.targets.cols()))).parameter_count();
  if (cfg.experiment == ExperimentKind::learn_rep)
    n += LearnedAction(build_group(GroupSpec::parse(cfg.group)), cfg.latent_dim, 0).parameter_count();
  return n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

namespace {

struct Setup {
  Dataset data;
  GroupPtr group;
  DenseNet encoder, decoder;
};

Setup make_setup(const ExperimentConfig& cfg) {
  cfg.validate();
  Dataset ds = synth_dataset(cfg.dataset, derive_seed(cfg.seed, 0));
  GroupPtr g = ds.input_action.group_ptr();
  DenseNet enc = DenseNet::init(encoder_spec(cfg, static_cast<int>(ds.inputs.cols())), derive_seed(cfg.seed, 1));
  DenseNet dec = DenseNet::init(decoder_spec(cfg, static_cast<int>(ds.targets.cols())), derive_seed(cfg.seed, 2));
  return {std::move(ds), std::move(g), std::move(enc), std::move(dec)};
}

RunReport start_report(const ExperimentConfig& cfg, const Setup& s) {
  RunReport r;
  r.config_json = config_to_json(cfg);
  r.seed = cfg.seed;
  r.experiment = experiment_kind_name(cfg.experiment);
  r.group = s.group->name();
  r.latent_dim = cfg.latent_dim;
  return r;
}

double test_task_loss(const Setup& s) {
  return task_loss(s.data.task, s.decoder.predict(s.encoder.predict(s.data.test_inputs())),
                   s.data.test_targets())
      .value;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RunReport run_learn_rep(const ExperimentConfig& cfg, const StepObserver& observer) {
  if (cfg.experiment != ExperimentKind::learn_rep)
    throw ConfigError("run_learn_rep needs experiment kind learn_rep");
  const auto t0 = std::chrono::steady_clock::now();
  Setup s = make_setup(cfg);
  LearnedAction action(s.group, cfg.latent_dim, derive_seed(cfg.seed, 3), cfg.action_init);
  const std::vector<Regulariser> regs = default_regularisers(s.group->spec());
  std::mt19937_64 rng(derive_seed(cfg.seed, 4));

  RunReport report = start_report(cfg, s);
  const Eigen::Index ne = s.encoder.parameter_count(), nd = s.decoder.parameter_count();
  const Eigen::VectorXd pe = s.encoder.parameters(), pd = s.decoder.parameters(), pa = action.parameters();
  Eigen::VectorXd params = concat({&pe, &pd, &pa});
  report.parameter_count = params.size();
  Adam adam(params.size(), cfg.optimizer);

  const std::vector<int> schedule = snapshot_steps(cfg.steps);
  std::size_t next_snapshot = 0;
  auto snapshot = [&](int step) {
    for (int k = 0; k < action.generator_count(); ++k) {
      if (!action.is_free(k)) continue;
      const int order = element_order(*s.group, s.group->generators()[k]);
      report.eigen_snapshots.push_back({step, k, eigen_snap(action.matrix(k), roots_of_unity(order))});
    }
  };

  for (int step = 0; step < cfg.steps; ++step) {
    if (next_snapshot < schedule.size() && schedule[next_snapshot] == step) {
      snapshot(step);
      ++next_snapshot;
    }
    const ActedBatch batch = sample_batch(s.data, s.data.train_count, cfg.batch_size, rng);
    const LossResult res = l_opt(s.encoder, s.decoder, action, regs, batch, cfg.weights, s.data.task);
    std::string why;
    if (diverged(res.parts, why)) {
      report.diverged = true;
      report.diagnostics = "diverged at step " + std::to_string(step) + ": " + why;
      break;
    }
    report.curves.push_back({step, res.parts});
    const Eigen::VectorXd grads = concat({&res.grads.encoder, &res.grads.decoder, &res.grads.action});
    adam.step(params, grads);
    if (!params.allFinite()) {
      report.diverged = true;
      report.diagnostics = "non-finite parameters after step " + std::to_string(step);
      break;
    }
    s.encoder.set_parameters(params.head(ne));
    s.decoder.set_parameters(params.segment(ne, nd));
    action.set_parameters(params.tail(params.size() - ne - nd));
    if (observer) observer(step, params);
  }

  for (int k = 0; k < action.generator_count(); ++k) report.final_generators.push_back(action.matrix(k));
  if (!report.diverged) {
    snapshot(cfg.steps);
    const std::vector<Eigen::MatrixXd> elements = action.element_matrices();
    const RealRepresentation learned(s.group, elements);
    report.test_task_loss = test_task_loss(s);
    report.equivariance_error = equivariance_error(s.encoder, s.data.input_action, learned, s.data.test_inputs());
    try {
      report.irreducible = irreducible_report(action, *char_table(s.group), 1e-2, report.equivariance_error);
      report.has_irreducible = true;
    } catch (const MissingTableError& e) {
      report.diagnostics = e.what();
    }
  }
  report.wall_clock_seconds = seconds_since(t0);
  return report;
}

RunReport run_method(const ExperimentConfig& cfg, const StepObserver& observer) {
  if (cfg.experiment == ExperimentKind::learn_rep) throw ConfigError("run_method cannot run learn_rep configs");
  const auto t0 = std::chrono::steady_clock::now();
  Setup s = make_setup(cfg);
  const RealRepresentation rho_z = latent_rep(s.group, cfg.latent_dim, cfg.regular_copies);
  std::mt19937_64 rng(derive_seed(cfg.seed, 4));

  RunReport report = start_report(cfg, s);
  const Eigen::Index ne = s.encoder.parameter_count();
  const Eigen::VectorXd pe = s.encoder.parameters(), pd = s.decoder.parameters();
  Eigen::VectorXd params = concat({&pe, &pd});
  report.parameter_count = params.size();
  Adam adam(params.size(), cfg.optimizer);

  for (int step = 0; step < cfg.steps; ++step) {
    const ActedBatch batch = sample_batch(s.data, s.data.train_count, cfg.batch_size, rng);
    LossResult res;
    switch (cfg.experiment) {
      case ExperimentKind::method:
        res = method_loss(s.encoder, s.decoder, rho_z, batch, cfg.weights.lambda, s.data.task);
        break;
      case ExperimentKind::baseline_augmented:
        res = augmented_loss(s.encoder, s.decoder, batch, s.data.task);
        break;
      default:
        res = plain_loss(s.encoder, s.decoder, batch, s.data.task);
        break;
    }
    std::string why;
    if (diverged(res.parts, why)) {
      report.diverged = true;
      report.diagnostics = "diverged at step " + std::to_string(step) + ": " + why;
      break;
    }
    report.curves.push_back({step, res.parts});
    const Eigen::VectorXd grads = concat({&res.grads.encoder, &res.grads.decoder});
    adam.step(params, grads);
    if (!params.allFinite()) {
      report.diverged = true;
      report.diagnostics = "non-finite parameters after step " + std::to_string(step);
      break;
    }
    s.encoder.set_parameters(params.head(ne));
    s.decoder.set_parameters(params.tail(params.size() - ne));
    if (observer) observer(step, params);
  }

  if (!report.diverged) {
    report.test_task_loss = test_task_loss(s);
    report.equivariance_error = equivariance_error(s.encoder, s.data.input_action, rho_z, s.data.test_inputs());
  }
  report.wall_clock_seconds = seconds_since(t0);
  return report;
}

RunReport run_experiment(const ExperimentConfig& cfg, const StepObserver& observer) {
  return cfg.experiment == ExperimentKind::learn_rep ? run_learn_rep(cfg, observer) : run_method(cfg, observer);
}

std::vector<GridPoint> grid_points(const ExperimentConfig& base) {
  const std::vector<double> lrs = base.grid_lr.empty() ? std::vector<double>{base.optimizer.lr} : base.grid_lr;
  const std::vector<double> lambdas =
      base.grid_lambda.empty() ? std::vector<double>{base.weights.lambda} : base.grid_lambda;
  std::vector<GridPoint> out;
  for (double lr : lrs) {
    for (double lambda : lambdas) {
      ExperimentConfig c = base;
      c.grid_lr.clear();
      c.grid_lambda.clear();
      c.optimizer.lr = lr;
      c.weights.lambda = lambda;
      const std::string label = "lr=" + fmt("%g", lr) + ",lambda=" + fmt("%g", lambda);
      c.name = base.name + "_" + std::to_string(out.size());
      out.push_back({label, std::move(c)});
    }
  }
  return out;
}

GridResult run_grid(const ExperimentConfig& base, int parallel) {
  if (parallel < 1) throw ConfigError("--parallel must be at least 1");
  GridResult result;
  result.points = grid_points(base);
  const std::size_t n = result.points.size();
  result.reports.resize(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        result.reports[i] = run_experiment(result.points[i].config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(parallel), n));
  for (int t = 1; t < workers; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (std::size_t i = 1; i < n; ++i) {
    const RunReport& r = result.reports[i];
    const RunReport& b = result.reports[result.best];
    if (!r.diverged && (b.diverged || r.test_task_loss < b.test_task_loss)) result.best = i;
  }
  return result;
}

BaselineComparison compare(const RunReport& method, const RunReport& baseline) {
  BaselineComparison c;
  c.task_loss_delta = method.test_task_loss - baseline.test_task_loss;
  c.equivariance_ratio = method.equivariance_error > 0
                             ? baseline.equivariance_error / method.equivariance_error
                             : std::numeric_limits<double>::infinity();
  c.same_parameter_count = method.parameter_count == baseline.parameter_count;
  return c;
}

}  // namespace grlt
