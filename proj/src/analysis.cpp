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

#include "grlt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <json.hpp>

#include "grlt/errors.hpp"
#include "grlt/matgrad.hpp"

namespace grlt {

namespace {

using json = nlohmann::json;

double argument(std::complex<double> z) {
  double a = std::arg(z);
  if (a < 0) a += 2.0 * std::numbers::pi;
  // -0.0 imaginary parts put 1 at 2 pi; fold it back.
  if (a >= 2.0 * std::numbers::pi - 1e-15) a = 0.0;
  return a;
}

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

double mean_square(const Eigen::MatrixXd& m) { return m.size() ? m.squaredNorm() / m.size() : 0.0; }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const Eigen::Index r = static_cast<Eigen::Index>(j.size());
  const Eigen::Index c = r ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    if (static_cast<Eigen::Index>(j.at(i).size()) != c) throw FormatError("ragged matrix in report", 0);
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = j.at(i).at(k).get<double>();
  }
  return m;
}

json parts_json(const LossParts& p) {
  return {{"task", p.task},           {"shifted_task", p.shifted_task},
          {"equivariance", p.equivariance}, {"algebra", p.algebra},
          {"regulariser", p.regulariser}, {"total", p.total}};
}

LossParts parts_from_json(const json& j) {
  LossParts p;
  p.task = j.at("task").get<double>();
  p.shifted_task = j.at("shifted_task").get<double>();
  p.equivariance = j.at("equivariance").get<double>();
  p.algebra = j.at("algebra").get<double>();
  p.regulariser = j.at("regulariser").get<double>();
  p.total = j.at("total").get<double>();
  return p;
}

json snap_json(const EigenSnapReport& s) {
  json ev = json::array(), allowed = json::array();
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i)
    ev.push_back({s.eigenvalues(i).real(), s.eigenvalues(i).imag()});
  for (const auto& a : s.allowed) allowed.push_back({a.real(), a.imag()});
  return {{"eigenvalues", ev},
          {"allowed", allowed},
          {"counts", s.counts},
          {"assignment", s.assignment},
          {"max_snap_distance", s.max_snap_distance},
          {"conjugate_defect", s.conjugate_defect}};
}

EigenSnapReport snap_from_json(const json& j) {
  EigenSnapReport s;
  const json& ev = j.at("eigenvalues");
  s.eigenvalues.resize(static_cast<Eigen::Index>(ev.size()));
  for (std::size_t i = 0; i < ev.size(); ++i)
    s.eigenvalues(static_cast<Eigen::Index>(i)) = {ev[i].at(0).get<double>(), ev[i].at(1).get<double>()};
  for (const json& a : j.at("allowed")) s.allowed.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
  s.counts = j.at("counts").get<std::vector<int>>();
  s.assignment = j.at("assignment").get<std::vector<int>>();
  s.max_snap_distance = j.at("max_snap_distance").get<double>();
  s.conjugate_defect = j.at("conjugate_defect").get<double>();
  return s;
}

json irreducible_json(const IrreducibleReport& r) {
  const Multiplicities& m = r.multiplicities;
  return {{"irrep_names", r.irrep_names},
          {"irrep_dims", r.irrep_dims},
          {"raw", std::vector<double>(m.raw.begin(), m.raw.end())},
          {"rounded", std::vector<int>(m.rounded.begin(), m.rounded.end())},
          {"max_rounding_error", m.max_rounding_error},
          {"imaginary_residue", m.imaginary_residue},
          {"dimension_consistent", m.dimension_consistent},
          {"residual", r.residual},
          {"is_representation", r.is_representation},
          {"algebra_loss", r.algebra_loss},
          {"equivariance_loss", r.equivariance_loss}};
}

IrreducibleReport irreducible_from_json(const json& j) {
  IrreducibleReport r;
  r.irrep_names = j.at("irrep_names").get<std::vector<std::string>>();
  r.irrep_dims = j.at("irrep_dims").get<std::vector<int>>();
  const auto raw = j.at("raw").get<std::vector<double>>();
  const auto rounded = j.at("rounded").get<std::vector<int>>();
  r.multiplicities.raw = Eigen::Map<const Eigen::VectorXd>(raw.data(), static_cast<Eigen::Index>(raw.size()));
  r.multiplicities.rounded =
      Eigen::Map<const Eigen::VectorXi>(rounded.data(), static_cast<Eigen::Index>(rounded.size()));
  r.multiplicities.max_rounding_error = j.at("max_rounding_error").get<double>();
  r.multiplicities.imaginary_residue = j.at("imaginary_residue").get<double>();
  r.multiplicities.dimension_consistent = j.at("dimension_consistent").get<bool>();
  r.residual = j.at("residual").get<double>();
  r.is_representation = j.at("is_representation").get<bool>();
  r.algebra_loss = j.at("algebra_loss").get<double>();
  r.equivariance_loss = j.at("equivariance_loss").get<double>();
  return r;
}

}  // namespace

std::vector<std::complex<double>> roots_of_unity(int n) {
  if (n < 1) throw ConfigError("roots of unity need n >= 1");
  std::vector<std::complex<double>> out;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    // Exact values on the axes keep snapping ties deterministic.
    double re = std::cos(t), im = std::sin(t);
    if (4 * k % n == 0) {
      const int q = 4 * k / n;
      re = q == 0 ? 1 : q == 2 ? -1 : 0;
      im = q == 1 ? 1 : q == 3 ? -1 : 0;
    }
    out.emplace_back(re, im);
  }
  return out;
}

EigenSnapReport eigen_snap(const Eigen::MatrixXd& m, const std::vector<std::complex<double>>& allowed) {
  if (allowed.empty()) throw ConfigError("eigen_snap needs a nonempty allowed set");
  if (m.rows() != m.cols() || m.rows() == 0) throw ShapeError("eigen_snap needs a nonempty square matrix");
  if (!m.allFinite()) throw NumericalError("eigen_snap: matrix has non-finite entries");
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  if (solver.info() != Eigen::Success) {
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
    throw NumericalError("eigensolver did not converge; singular values span [" +
                         format("%.3e", sv.minCoeff()) + ", " + format("%.3e", sv.maxCoeff()) +
                         "], condition " + format("%.3e", sv.maxCoeff() / sv.minCoeff()));
  }
  EigenSnapReport r;
  r.eigenvalues = solver.eigenvalues();
  r.allowed = allowed;
  r.counts.assign(allowed.size(), 0);
  std::vector<double> args(allowed.size());
  for (std::size_t k = 0; k < allowed.size(); ++k) args[k] = argument(allowed[k]);
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) {
    const std::complex<double> z = r.eigenvalues(i);
    double best = std::abs(z - allowed[0]);
    for (const auto& a : allowed) best = std::min(best, std::abs(z - a));
    std::size_t pick = allowed.size();
    for (std::size_t k = 0; k < allowed.size(); ++k)
      if (std::abs(z - allowed[k]) <= best + 1e-12 && (pick == allowed.size() || args[k] < args[pick]))
        pick = k;
    ++r.counts[pick];
    r.assignment.push_back(static_cast<int>(pick));
    r.max_snap_distance = std::max(r.max_snap_distance, best);
  }
  // Greedy matching of each eigenvalue with the conjugate of another.
  const Eigen::Index d = r.eigenvalues.size();
  std::vector<bool> used(d, false);
  for (Eigen::Index i = 0; i < d; ++i) {
    const std::complex<double> c = std::conj(r.eigenvalues(i));
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < d; ++j)
      if (!used[j] && (best < 0 || std::abs(r.eigenvalues(j) - c) < std::abs(r.eigenvalues(best) - c)))
        best = j;
    used[best] = true;
    r.conjugate_defect = std::max(r.conjugate_defect, std::abs(r.eigenvalues(best) - c));
  }
  return r;
}

int element_order(const Group& group, Element g) {
  int k = 1;
  for (Element x = g; x != Group::identity(); x = group.mul(x, g)) ++k;
  return k;
}

std::vector<Eigen::MatrixXd> expand_generators(const Group& group,
                                               const std::vector<Eigen::MatrixXd>& generators) {
  if (generators.size() != group.generators().size())
    throw ShapeError(group.name() + " has " + std::to_string(group.generators().size()) +
                     " generators, got " + std::to_string(generators.size()) + " matrices");
  const Eigen::Index d = generators.front().rows();
  for (const auto& m : generators)
    if (m.rows() != d || m.cols() != d) throw ShapeError("generator matrices must share a square shape");
  std::vector<Eigen::MatrixXd> out;
  out.reserve(group.order());
  for (Element g = 0; g < group.order(); ++g) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(d, d);
    for (const Letter& l : group.word_for(g).letters())
      for (int e = 0; e < l.exponent; ++e) acc = acc * generators[l.generator];
    out.push_back(std::move(acc));
  }
  return out;
}

double algebra_loss_value(const Group& group, const std::vector<Eigen::MatrixXd>& generators) {
  if (generators.empty()) throw ShapeError("algebra loss needs generator matrices");
  ExprGraph graph;
  BoundAction bound;
  bound.graph = &graph;
  bound.dim = static_cast<int>(generators.front().rows());
  bound.identity = graph.identity(bound.dim);
  for (std::size_t k = 0; k < generators.size(); ++k) {
    bound.generators.push_back(graph.parameter(generators[k], "generator" + std::to_string(k)));
    bound.free.push_back(true);
  }
  return graph.evaluate_scalar(algebra_loss(group, bound));
}

IrreducibleReport irreducible_report(const Group& group, const std::vector<Eigen::MatrixXd>& generators,
                                     const CharacterTable& table, double tol,
                                     double equivariance_loss) {
  for (const auto& m : generators)
    if (!m.allFinite()) throw NumericalError("learned matrices contain non-finite entries");
  const std::vector<Eigen::MatrixXd> elements = expand_generators(group, generators);
  IrreducibleReport r;
  for (const Irrep& ir : table.irreps) {
    r.irrep_names.push_back(ir.name);
    r.irrep_dims.push_back(ir.dim);
  }
  r.residual = homomorphism_residual(elements, group);
  r.is_representation = r.residual <= tol;
  r.multiplicities = decompose(RealRepresentation(table.group, elements), table);
  r.algebra_loss = algebra_loss_value(group, generators);
  r.equivariance_loss = equivariance_loss;
  return r;
}

IrreducibleReport irreducible_report(const LearnedAction& learned, const CharacterTable& table,
                                     double tol, double equivariance_loss) {
  std::vector<Eigen::MatrixXd> gens;
  for (int k = 0; k < learned.generator_count(); ++k) gens.push_back(learned.matrix(k));
  return irreducible_report(learned.group(), gens, table, tol, equivariance_loss);
}

std::string table_csv_header(const std::vector<std::string>& irrep_names) {
  std::string out = "run";
  for (const auto& n : irrep_names) out += "," + n;
  return out + ",algebra_loss,equivariance_loss,residual";
}

std::string table_csv_row(const std::string& run, const IrreducibleReport& report) {
  std::string out = run;
  for (Eigen::Index i = 0; i < report.multiplicities.raw.size(); ++i)
    out += "," + format("%.3f", report.multiplicities.raw(i));
  out += "," + format("%.6e", report.algebra_loss);
  out += "," + format("%.6e", report.equivariance_loss);
  out += "," + format("%.6e", report.residual);
  return out;
}

std::string format_table(const std::vector<std::pair<std::string, IrreducibleReport>>& rows) {
  if (rows.empty()) return "";
  std::ostringstream out;
  auto cell = [&out](const std::string& s, int w) {
    out << s << std::string(s.size() < static_cast<std::size_t>(w) ? w - s.size() : 1, ' ');
  };
  cell("run", 10);
  for (const auto& n : rows.front().second.irrep_names) cell(n, 8);
  out << "algebra       equivariance  residual\n";
  for (const auto& [run, r] : rows) {
    cell(run, 10);
    for (Eigen::Index i = 0; i < r.multiplicities.rounded.size(); ++i)
      cell(std::to_string(r.multiplicities.rounded(i)), 8);
    cell(format("%.2e", r.algebra_loss), 14);
    cell(format("%.2e", r.equivariance_loss), 14);
    out << format("%.2e", r.residual);
    if (!r.is_representation) out << "  (not a representation)";
    if (!r.multiplicities.dimension_consistent) out << "  (inconsistent dimensions)";
    out << '\n';
  }
  return out.str();
}

double equivariance_error(const DenseNet& encoder, const ActionSpec& rho_x,
                          const RealRepresentation& rho_z, const Eigen::MatrixXd& inputs) {
  if (inputs.rows() == 0) throw ContractError("equivariance error needs a nonempty split");
  if (rho_x.length() != encoder.spec().input_dim || inputs.cols() != rho_x.length())
    throw ShapeError("input action length " + std::to_string(rho_x.length()) + ", encoder input " +
                     std::to_string(encoder.spec().input_dim) + ", data width " +
                     std::to_string(inputs.cols()) + " must agree");
  if (rho_z.dim() != encoder.spec().output_dim())
    throw ShapeError("latent representation has dimension " + std::to_string(rho_z.dim()) +
                     " but the encoder outputs " + std::to_string(encoder.spec().output_dim()));
  if (!same_group(rho_x.group(), rho_z.group()))
    throw IncompatibleError("input action and latent representation use different groups");
  const Eigen::MatrixXd z = encoder.predict(inputs);
  double total = 0.0;
  for (Element g = 0; g < rho_x.group().order(); ++g) {
    const Eigen::MatrixXd zg = encoder.predict(rho_x.apply_rows(g, inputs));
    total += mean_square(z * rho_z[g].transpose() - zg);
  }
  return total / rho_x.group().order();
}

std::vector<int> snapshot_steps(int steps) {
  std::vector<int> out;
  if (steps < 0) return out;
  out.push_back(0);
  for (int s = 1; s < steps; s *= 2) out.push_back(s);
  if (steps > 0) out.push_back(steps);
  return out;
}

std::string report_to_json(const RunReport& report) {
  json j;
  j["config"] = report.config_json.empty() ? json::object() : json::parse(report.config_json);
  j["seed"] = report.seed;
  j["experiment"] = report.experiment;
  j["group"] = report.group;
  j["latent_dim"] = report.latent_dim;
  j["parameter_count"] = report.parameter_count;
  json curves = json::array();
  for (const CurvePoint& c : report.curves) {
    json p = parts_json(c.parts);
    p["step"] = c.step;
    curves.push_back(std::move(p));
  }
  j["curves"] = std::move(curves);
  json snaps = json::array();
  for (const EigenSnapshot& s : report.eigen_snapshots) {
    json e = snap_json(s.snap);
    e["step"] = s.step;
    e["generator"] = s.generator;
    snaps.push_back(std::move(e));
  }
  j["eigen_snapshots"] = std::move(snaps);
  j["snapshot_schedule"] = "geometric";
  if (report.has_irreducible) j["irreducible"] = irreducible_json(report.irreducible);
  json gens = json::array();
  for (const auto& m : report.final_generators) gens.push_back(matrix_json(m));
  j["final_generators"] = std::move(gens);
  j["test_task_loss"] = report.test_task_loss;
  j["equivariance_error"] = report.equivariance_error;
  j["diverged"] = report.diverged;
  j["diagnostics"] = report.diagnostics;
  j["wall_clock_seconds"] = report.wall_clock_seconds;
  return j.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    RunReport r;
    r.config_json = j.at("config").dump();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.experiment = j.at("experiment").get<std::string>();
    r.group = j.at("group").get<std::string>();
    r.latent_dim = j.at("latent_dim").get<int>();
    r.parameter_count = j.at("parameter_count").get<Eigen::Index>();
    for (const json& c : j.at("curves")) r.curves.push_back({c.at("step").get<int>(), parts_from_json(c)});
    for (const json& s : j.at("eigen_snapshots"))
      r.eigen_snapshots.push_back({s.at("step").get<int>(), s.at("generator").get<int>(), snap_from_json(s)});
    if (j.contains("irreducible")) {
      r.has_irreducible = true;
      r.irreducible = irreducible_from_json(j.at("irreducible"));
    }
    for (const json& m : j.at("final_generators")) r.final_generators.push_back(matrix_from_json(m));
    r.test_task_loss = j.at("test_task_loss").get<double>();
    r.equivariance_error = j.at("equivariance_error").get<double>();
    r.diverged = j.at("diverged").get<bool>();
    r.diagnostics = j.at("diagnostics").get<std::string>();
    r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    return r;
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed report: ") + e.what(), e.byte);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed report: ") + e.what(), 0);
  }
}

std::string curves_csv(const RunReport& report) {
  const std::string seed = std::to_string(report.seed) + ",";
  std::string out = "seed,step,task,shifted_task,equivariance,algebra,regulariser,total\n";
  for (const CurvePoint& c : report.curves) {
    out += seed + std::to_string(c.step);
    for (double v : {c.parts.task, c.parts.shifted_task, c.parts.equivariance, c.parts.algebra,
                     c.parts.regulariser, c.parts.total})
      out += "," + format("%.9e", v);
    out += '\n';
  }
  return out;
}

std::string eigen_snapshots_csv(const RunReport& report) {
  const std::string seed = std::to_string(report.seed) + ",";
  std::string out = "seed,step,generator,index,re,im,snapped\n";
  for (const EigenSnapshot& s : report.eigen_snapshots) {
    for (Eigen::Index i = 0; i < s.snap.eigenvalues.size(); ++i) {
      const std::complex<double> z = s.snap.eigenvalues(i);
      out += seed + std::to_string(s.step) + "," + std::to_string(s.generator) + "," + std::to_string(i) +
             "," + format("%.9e", z.real()) + "," + format("%.9e", z.imag()) + "," +
             std::to_string(s.snap.assignment[i]) + "\n";
    }
  }
  return out;
}

}  // namespace grlt
