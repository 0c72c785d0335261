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

// grlt: group info, representation learning runs, the fixed-representation
// method, matrix analysis, gradient checks and grids.
//
// Exit codes: 0 success, 1 failed gradient check, 2 configuration or format
// error, 3 numerical divergence.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "grlt/analysis.hpp"
#include "grlt/atomic_file.hpp"
#include "grlt/character_table.hpp"
#include "grlt/errors.hpp"
#include "grlt/experiments.hpp"
#include "grlt/gradcheck.hpp"
#include "grlt/matgrad.hpp"
#include "grlt/matrix_io.hpp"

namespace {

using namespace grlt;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

const char* kConfigHelp = R"(Config file (JSON). Every key is optional; unknown keys are rejected.
  experiment:   kind (learn_rep | method | baseline_augmented | baseline_plain, default learn_rep),
                name ("run"), seed (0), steps (2000), batch_size (64),
                grid {lr: [...], lambda: [...]} (empty: base value)
  group:        "c4" | "d1" | "d3" | "o" | ... or {spec: "..."} (default c4)
  dataset:      kind (per group: d1 d1_pairswap, d3 d3_blocks, c4 c4_autoencode, o s4_voxels;
                d3_blocks_classify is also available), n (1000), size (d1 16, d3 8, c4 8, o 4)
  model:        encoder_hidden ([32]), decoder_hidden ([32]), activation (relu),
                output_activation (sigmoid; none for classification), latent_dim (d1 10, d3 12,
                c4 16, o 24), regular_copies (1), action_init (orthogonal | near_identity)
  optimizer:    lr (0.003), beta1 (0.9), beta2 (0.999), eps (1e-8), weight_decay (0)
  loss_weights: lambda_t, lambda_e, lambda_a (d1 0.025/0.475/1, d3 0.495/0.005/0.5,
                c4 and o 0.25/0.25/1), lambda (1)
  output:       dir ("out")
Exit codes: 0 success, 2 configuration or format error, 3 divergence.)";

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string complex_text(std::complex<double> z) {
  auto clean = [](double v) { return std::abs(v) < 5e-10 ? 0.0 : v; };
  const double re = clean(z.real()), im = clean(z.imag());
  auto num = [](double v) {
    const double r = std::round(v);
    return std::abs(v - r) < 5e-10 ? std::to_string(static_cast<long long>(r)) : fmt("%.4f", v);
  };
  if (im == 0.0) return num(re);
  const std::string imag = std::abs(im) == 1.0 ? "i" : num(std::abs(im)) + "i";
  if (re == 0.0) return (im < 0 ? "-" : "") + imag;
  return num(re) + (im < 0 ? "-" : "+") + imag;
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' '); }

std::string word_text(const Group& g, Element e) {
  const Word& w = g.word_for(e);
  if (w.empty()) return "e";
  std::string out;
  for (const Letter& l : w.letters()) {
    out += "g" + std::to_string(l.generator);
    if (l.exponent != 1) out += "^" + std::to_string(l.exponent);
  }
  return out;
}

// ---- group-info ----

std::size_t name_width(const CharacterTable& table) {
  std::size_t w = 10;
  for (const Irrep& irrep : table.irreps) w = std::max(w, irrep.name.size() + 2);
  return w;
}

int group_info(const std::string& spec_text) {
  const GroupPtr g = build_group(GroupSpec::parse(spec_text));
  std::cout << "group " << g->name() << "\n";
  std::cout << "order " << g->order() << "\n";
  std::cout << "generators";
  for (Element e : g->generators()) std::cout << " " << e << "(order " << element_order(*g, e) << ")";
  std::cout << "\n";

  const auto& classes = g->conjugacy_classes();
  std::cout << "conjugacy classes " << classes.size() << "\n";
  for (std::size_t c = 0; c < classes.size(); ++c)
    std::cout << "  C" << c << "  size " << classes[c].size() << "  representative "
              << word_text(*g, classes[c].front()) << "  order " << element_order(*g, classes[c].front())
              << "\n";

  const std::shared_ptr<const CharacterTable> table = char_table(g);
  const std::size_t nw = name_width(*table);
  std::cout << "character table\n" << pad("irrep", nw) << pad("dim", 5);
  for (std::size_t c = 0; c < classes.size(); ++c) std::cout << pad("C" + std::to_string(c), 12);
  std::cout << "\n";
  for (const Irrep& irrep : table->irreps) {
    std::cout << pad(irrep.name, nw) << pad(std::to_string(irrep.dim), 5);
    for (const auto& cls : classes) std::cout << pad(complex_text(irrep.character(cls.front())), 12);
    std::cout << "\n";
  }

  const GroupDiagnostics diag = verify_group(*g);
  const double defect = orthonormality_defect(*table);
  std::cout << "axioms " << (diag.ok() ? "ok" : "FAILED") << "\n";
  for (const std::string& f : diag.failures) std::cout << "  " << f << "\n";
  std::cout << "character orthonormality defect " << fmt("%.3e", defect) << "\n";
  return diag.ok() && defect <= 1e-9 ? kExitOk : kExitCheckFailed;
}

// ---- analyze ----

template <typename Scalar>
void print_multiplicities(const Representation<Scalar>& rep, const CharacterTable& table) {
  const Multiplicities m = decompose(rep, table);
  const std::size_t nw = name_width(table);
  std::cout << "multiplicities\n" << pad("irrep", nw) << pad("dim", 5) << pad("raw", 12) << "rounded\n";
  for (std::size_t i = 0; i < table.irreps.size(); ++i)
    std::cout << pad(table.irreps[i].name, nw) << pad(std::to_string(table.irreps[i].dim), 5)
              << pad(fmt("%.4f", std::abs(m.raw(static_cast<Eigen::Index>(i))) < 5e-5 ? 0.0 : m.raw(static_cast<Eigen::Index>(i))), 12)
              << m.rounded(static_cast<Eigen::Index>(i)) << "\n";
  std::cout << "max rounding error " << fmt("%.3e", m.max_rounding_error) << "\n";
  if (!m.dimension_consistent) std::cout << "rounded multiplicities do not add up to the dimension\n";
}

int analyze(const std::string& path, const std::string& spec_text, double tol) {
  const GroupPtr g = build_group(GroupSpec::parse(spec_text));
  const MatrixFile file = read_matrices_file(path);
  const int count = static_cast<int>(file.matrices.size());
  const int ngen = static_cast<int>(g->generators().size());
  const bool per_element = count == g->order();
  if (!per_element && count != ngen)
    throw ConfigError(path + " holds " + std::to_string(count) + " matrices; " + g->name() + " needs " +
                      std::to_string(g->order()) + " (one per element) or " + std::to_string(ngen) +
                      " (one per generator)");
  std::cout << "group " << g->name() << ", dimension " << file.dim << ", "
            << (per_element ? "one matrix per element" : "one matrix per generator")
            << (file.complex ? ", complex" : "") << "\n";
  const std::shared_ptr<const CharacterTable> table = char_table(g);

  if (file.complex) {
    if (!per_element) throw ConfigError("complex matrices must be given per element");
    const double residual = homomorphism_residual(file.matrices, *g);
    std::cout << "residual " << fmt("%.3e", residual)
              << (residual <= tol ? "" : "  (not a representation: residual above tolerance)") << "\n";
    print_multiplicities(ComplexRepresentation(g, file.matrices), *table);
    return kExitOk;
  }

  const std::vector<Eigen::MatrixXd> given = file.real_matrices();
  std::vector<Eigen::MatrixXd> gens, elements;
  if (per_element) {
    elements = given;
    for (Element e : g->generators()) gens.push_back(given[e]);
  } else {
    gens = given;
    elements = expand_generators(*g, gens);
  }
  const double residual = homomorphism_residual(elements, *g);
  std::cout << "residual " << fmt("%.3e", residual)
            << (residual <= tol ? "" : "  (not a representation: residual above tolerance)") << "\n";
  std::cout << "algebra loss " << fmt("%.6e", algebra_loss_value(*g, gens)) << "\n";
  print_multiplicities(RealRepresentation(g, elements), *table);

  for (int k = 0; k < ngen; ++k) {
    const int order = element_order(*g, g->generators()[k]);
    const std::vector<std::complex<double>> roots = roots_of_unity(order);
    const EigenSnapReport snap = eigen_snap(gens[k], roots);
    std::cout << "generator " << k << " (order " << order << ") eigen-snap:";
    for (std::size_t r = 0; r < roots.size(); ++r) std::cout << " " << complex_text(roots[r]) << ":" << snap.counts[r];
    std::cout << "  max distance " << fmt("%.3e", snap.max_snap_distance) << "\n";
  }
  return kExitOk;
}

// ---- runs ----

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string output;
};

ExperimentConfig load_config(const RunOptions& o) {
  std::string text;
  try {
    text = read_file(o.config);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  ExperimentConfig cfg = parse_config(text);
  if (o.seed) cfg.seed = *o.seed;
  if (!o.output.empty()) cfg.output_dir = o.output;
  return cfg;
}

void write_out(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(dir);
  write_file_atomic((dir / name).string(), content);
}

std::string summary_csv(const std::string& run, const RunReport& r) {
  return "run,experiment,seed,parameter_count,test_task_loss,equivariance_error,diverged\n" + run + "," +
         r.experiment + "," + std::to_string(r.seed) + "," + std::to_string(r.parameter_count) + "," +
         fmt("%.9e", r.test_task_loss) + "," + fmt("%.9e", r.equivariance_error) + "," +
         (r.diverged ? "1" : "0") + "\n";
}

void write_report(const std::filesystem::path& dir, const std::string& run, const RunReport& r) {
  write_out(dir, "report.json", report_to_json(r));
  write_out(dir, "curves.csv", curves_csv(r));
  write_out(dir, "summary.csv", summary_csv(run, r));
  if (r.experiment == "learn_rep") {
    write_out(dir, "eigen_snapshots.csv", eigen_snapshots_csv(r));
    if (r.has_irreducible)
      write_out(dir, "table.csv",
                table_csv_header(r.irreducible.irrep_names) + ",seed\n" + table_csv_row(run, r.irreducible) + "," +
                    std::to_string(r.seed) + "\n");
  }
}

void print_run(const std::string& run, const RunReport& r) {
  std::cout << run << ": " << r.experiment << " on " << r.group << ", seed " << r.seed << ", "
            << r.parameter_count << " parameters, " << r.curves.size() << " steps, "
            << fmt("%.2f", r.wall_clock_seconds) << " s\n";
  if (r.diverged) {
    std::cout << "diverged: " << r.diagnostics << "\n";
    return;
  }
  std::cout << "test task loss " << fmt("%.6e", r.test_task_loss) << ", equivariance error "
            << fmt("%.6e", r.equivariance_error) << "\n";
  if (r.has_irreducible) std::cout << format_table({{run, r.irreducible}});
  else if (!r.diagnostics.empty()) std::cout << r.diagnostics << "\n";
}

int learn_rep(const RunOptions& o) {
  const ExperimentConfig cfg = load_config(o);
  if (cfg.experiment != ExperimentKind::learn_rep)
    throw ConfigError("config experiment.kind is '" + std::string(experiment_kind_name(cfg.experiment)) +
                      "'; use train-method for it");
  const RunReport r = run_learn_rep(cfg);
  write_report(cfg.output_dir, cfg.name, r);
  print_run(cfg.name, r);
  return r.diverged ? kExitDiverged : kExitOk;
}

int train_method(const RunOptions& o, bool with_baseline) {
  ExperimentConfig cfg = load_config(o);
  if (cfg.experiment == ExperimentKind::learn_rep) {
    cfg.experiment = ExperimentKind::method;
    cfg.validate();
  }
  const RunReport r = run_method(cfg);
  const std::filesystem::path dir(cfg.output_dir);
  write_report(dir, cfg.name, r);
  print_run(cfg.name, r);
  bool diverged = r.diverged;
  if (with_baseline) {
    ExperimentConfig base = cfg;
    base.experiment = ExperimentKind::baseline_augmented;
    base.name = cfg.name + "_baseline";
    const RunReport b = run_method(base);
    write_report(dir / "baseline", base.name, b);
    print_run(base.name, b);
    const BaselineComparison c = compare(r, b);
    write_out(dir, "comparison.csv",
              "seed,task_loss_delta,equivariance_ratio,same_parameter_count\n" + std::to_string(cfg.seed) + "," +
                  fmt("%.9e", c.task_loss_delta) + "," + fmt("%.9e", c.equivariance_ratio) + "," +
                  (c.same_parameter_count ? "1" : "0") + "\n");
    std::cout << "task loss delta " << fmt("%.6e", c.task_loss_delta) << ", equivariance ratio "
              << fmt("%.3f", c.equivariance_ratio) << ", same parameter count "
              << (c.same_parameter_count ? "yes" : "no") << "\n";
    diverged = diverged || b.diverged;
  }
  return diverged ? kExitDiverged : kExitOk;
}

int grid(const RunOptions& o, int parallel) {
  const ExperimentConfig cfg = load_config(o);
  const GridResult g = run_grid(cfg, parallel);
  const std::filesystem::path dir(cfg.output_dir);
  std::string csv = "index,label,seed,test_task_loss,equivariance_error,diverged,best\n";
  bool all_diverged = true;
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    const RunReport& r = g.reports[i];
    const std::string& name = g.points[i].config.name;
    write_report(dir / name, name, r);
    csv += std::to_string(i) + ",\"" + g.points[i].label + "\"," + std::to_string(r.seed) + "," +
           fmt("%.9e", r.test_task_loss) + "," + fmt("%.9e", r.equivariance_error) + "," +
           (r.diverged ? "1" : "0") + "," + (i == g.best ? "1" : "0") + "\n";
    all_diverged = all_diverged && r.diverged;
    std::cout << pad(g.points[i].label, 28) << (r.diverged ? "diverged" : fmt("test task loss %.6e", r.test_task_loss))
              << (i == g.best ? "  <- best" : "") << "\n";
  }
  write_out(dir, "grid.csv", csv);
  return all_diverged ? kExitDiverged : kExitOk;
}

int gradcheck(bool quick, const std::string& fault) {
  if (!fault.empty()) {
    std::optional<Op> op;
    for (Op candidate : {Op::matmul, Op::add, Op::sub, Op::scale, Op::transpose, Op::inverse, Op::frobenius_mse})
      if (fault == op_name(candidate)) op = candidate;
    if (!op) throw ConfigError("unknown backward rule '" + fault + "'");
    set_backward_fault(op);
  }
  GradCheckOptions options;
  if (quick) {
    options.loss_points = 3;
    options.networks = false;
  }
  const GradCheckSuite suite = run_gradcheck_suite(options);
  std::cout << format_gradcheck(suite);
  return suite.pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group representation learning toolkit"};
  app.require_subcommand(1);

  std::string group_spec = "c4";
  auto* info = app.add_subcommand("group-info", "Order, conjugacy classes, character table and axiom checks");
  info->add_option("--group", group_spec, "Group spec: cN, dN, sN, o, product:A,B")->required();

  RunOptions run;
  auto add_run_flags = [&run](CLI::App* sub) {
    sub->add_option("--config", run.config, "JSON config file")->required();
    sub->add_option("--seed", run.seed, "Overrides experiment.seed; echoed in every output");
    sub->add_option("--output", run.output, "Overrides output.dir");
    sub->footer(kConfigHelp);
  };
  auto* learn = app.add_subcommand("learn-rep", "Learn a latent group action jointly with an autoencoder");
  add_run_flags(learn);
  bool with_baseline = false;
  auto* method = app.add_subcommand("train-method", "Train with a fixed latent regular representation");
  add_run_flags(method);
  method->add_flag("--with-baseline", with_baseline, "Also run the augmented baseline and compare");
  int parallel = 1;
  auto* grid_cmd = app.add_subcommand("grid", "Grid over experiment.grid.lr and experiment.grid.lambda");
  add_run_flags(grid_cmd);
  grid_cmd->add_option("--parallel", parallel, "Grid points run concurrently")->check(CLI::PositiveNumber);

  std::string matrices;
  double tol = 1e-2;
  auto* analyze_cmd = app.add_subcommand("analyze", "Residual, multiplicities and eigen-snap counts of matrices");
  analyze_cmd->add_option("matrices", matrices, "Matrix file (one matrix per element or per generator)")->required();
  analyze_cmd->add_option("--group", group_spec, "Group spec")->required();
  analyze_cmd->add_option("--tolerance", tol, "Residual above which the input is flagged")->capture_default_str();

  bool quick = false;
  std::string fault;
  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of every loss graph");
  grad->add_flag("--quick", quick, "Fewer points, no desk-size networks");
  grad->add_option("--fault", fault, "Corrupt one backward rule")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*info) return group_info(group_spec);
    if (*learn) return learn_rep(run);
    if (*method) return train_method(run, with_baseline);
    if (*grid_cmd) return grid(run, parallel);
    if (*analyze_cmd) return analyze(matrices, group_spec, tol);
    if (*grad) return gradcheck(quick, fault);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const MissingTableError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}
