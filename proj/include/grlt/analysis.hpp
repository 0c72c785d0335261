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

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "grlt/character_table.hpp"
#include "grlt/data.hpp"
#include "grlt/losses.hpp"
#include "grlt/nnet.hpp"
#include "grlt/representation.hpp"

namespace grlt {

struct EigenSnapReport {
  Eigen::VectorXcd eigenvalues;
  std::vector<std::complex<double>> allowed;
  /// counts[k] eigenvalues snapped to allowed[k].
  std::vector<int> counts;
  /// assignment[i] is the allowed index eigenvalue i snapped to.
  std::vector<int> assignment;
  double max_snap_distance = 0.0;
  /// Distance between the eigenvalue multiset and its complex conjugate.
  double conjugate_defect = 0.0;
};

/// exp(2 pi i k / n) for k = 0..n-1.
std::vector<std::complex<double>> roots_of_unity(int n);

/// Snaps every eigenvalue of `m` to its nearest allowed value. Ties go to the
/// allowed value with the smallest argument in [0, 2 pi). Throws
/// NumericalError if the eigensolver fails or `m` is not finite.
EigenSnapReport eigen_snap(const Eigen::MatrixXd& m, const std::vector<std::complex<double>>& allowed);

/// Order of g in its group.
int element_order(const Group& group, Element g);

/// Per-element matrices from per-generator matrices via shortest words.
std::vector<Eigen::MatrixXd> expand_generators(const Group& group,
                                               const std::vector<Eigen::MatrixXd>& generators);

/// Relator loss of plain generator matrices (every generator treated as free).
double algebra_loss_value(const Group& group, const std::vector<Eigen::MatrixXd>& generators);

struct IrreducibleReport {
  std::vector<std::string> irrep_names;
  std::vector<int> irrep_dims;
  Multiplicities multiplicities;
  double residual = 0.0;
  bool is_representation = true;
  double algebra_loss = 0.0;
  double equivariance_loss = 0.0;
};

IrreducibleReport irreducible_report(const Group& group, const std::vector<Eigen::MatrixXd>& generators,
                                     const CharacterTable& table, double tol = 1e-2,
                                     double equivariance_loss = 0.0);
IrreducibleReport irreducible_report(const LearnedAction& learned, const CharacterTable& table,
                                     double tol = 1e-2, double equivariance_loss = 0.0);

/// `run,<irrep names>,algebra_loss,equivariance_loss,residual`
std::string table_csv_header(const std::vector<std::string>& irrep_names);
/// Raw multiplicities with 3 decimals, losses in %.6e.
std::string table_csv_row(const std::string& run, const IrreducibleReport& report);
/// Fixed-width text rendering of several rows under one header.
std::string format_table(const std::vector<std::pair<std::string, IrreducibleReport>>& rows);

/// Mean over every g and every row of mse(rho_z(g) E(x), E(rho_x(g) x)).
/// Throws ShapeError on dimension mismatches and ContractError on an empty split.
double equivariance_error(const DenseNet& encoder, const ActionSpec& rho_x,
                          const RealRepresentation& rho_z, const Eigen::MatrixXd& inputs);

/// 0, 1, 2, 4, 8, ... below `steps`, then `steps` itself.
std::vector<int> snapshot_steps(int steps);

struct CurvePoint {
  int step = 0;
  LossParts parts;
};

struct EigenSnapshot {
  int step = 0;
  int generator = 0;
  EigenSnapReport snap;
};

struct RunReport {
  /// Echo of the configuration that produced the run.
  std::string config_json;
  std::uint64_t seed = 0;
  std::string experiment;
  std::string group;
  int latent_dim = 0;
  Eigen::Index parameter_count = 0;
  std::vector<CurvePoint> curves;
  std::vector<EigenSnapshot> eigen_snapshots;
  /// Learned-representation runs only.
  bool has_irreducible = false;
  IrreducibleReport irreducible;
  std::vector<Eigen::MatrixXd> final_generators;
  double test_task_loss = 0.0;
  double equivariance_error = 0.0;
  bool diverged = false;
  std::string diagnostics;
  double wall_clock_seconds = 0.0;
};

std::string report_to_json(const RunReport& report);
/// Throws FormatError on malformed input.
RunReport report_from_json(const std::string& text);

/// seed,step,task,shifted_task,equivariance,algebra,regulariser,total
std::string curves_csv(const RunReport& report);
/// seed,step,generator,index,re,im,snapped
std::string eigen_snapshots_csv(const RunReport& report);

}  // namespace grlt
