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

#include <cstring>
#include <random>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "grlt/adam.hpp"
#include "grlt/errors.hpp"
#include "grlt/matgrad.hpp"

namespace grlt {
namespace {

Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int r, int c) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index k = 0; k < m.size(); ++k) m(k) = n(rng);
  return m;
}

// Orthogonal U, V and singular values spread over [1, cond].
Eigen::MatrixXd conditioned_matrix(std::mt19937_64& rng, int d, double cond) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(random_matrix(rng, d, d),
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd s(d);
  for (int i = 0; i < d; ++i) s(i) = std::pow(cond, static_cast<double>(i) / (d - 1));
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

TEST(MatgradTest, MseExamples) {
  ExprGraph g;
  const Expr i3 = g.identity(3);
  EXPECT_EQ(g.evaluate_scalar(mse(i3, i3)), 0.0);
  const Expr two = g.constant(2.0 * Eigen::MatrixXd::Identity(3, 3));
  // mean((2I - I)^2) = 3 ones among 9 entries.
  double manual = 0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) manual += std::pow((r == c ? 2.0 : 0.0) - (r == c ? 1.0 : 0.0), 2);
  EXPECT_DOUBLE_EQ(g.evaluate_scalar(mse(two, i3)), manual / 9.0);
  EXPECT_DOUBLE_EQ(manual / 9.0, 1.0 / 3.0);
  EXPECT_EQ(g.evaluate(inverse(g.identity(4))), Eigen::MatrixXd::Identity(4, 4));
}

TEST(MatgradTest, MseGradientMatchesClosedForm) {
  std::mt19937_64 rng(1);
  const int d = 4;
  ExprGraph g;
  const Eigen::MatrixXd w0 = random_matrix(rng, d, d);
  const Expr w = g.parameter(w0, "W");
  const Expr loss = mse(w, g.identity(d));
  g.evaluate(loss);
  g.backward(loss);
  const Eigen::MatrixXd expected = 2.0 * (w0 - Eigen::MatrixXd::Identity(d, d)) / (d * d);
  EXPECT_LE((g.grad(w) - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE(finite_diff_check(g, loss).max_relative_error, 1e-7);
}

TEST(MatgradTest, StationaryPointHasZeroGradient) {
  ExprGraph g;
  const Expr w = g.parameter(Eigen::MatrixXd::Identity(3, 3));
  const Expr loss = mse(w * w, g.identity(3));
  g.evaluate(loss);
  g.backward(loss);
  EXPECT_EQ(g.grad(w), Eigen::MatrixXd::Zero(3, 3));
}

TEST(MatgradTest, InverseGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    ExprGraph g;
    const Expr a = g.parameter(conditioned_matrix(rng, 5, 10.0));
    const Expr b = g.parameter(random_matrix(rng, 5, 5));
    const Expr loss = mse(inverse(a) * b, g.constant(random_matrix(rng, 5, 5)));
    const GradCheckResult r = finite_diff_check(g, loss);
    EXPECT_FALSE(r.skipped);
    EXPECT_LE(r.max_relative_error, 1e-4);
  }
}

TEST(MatgradTest, EveryOpPassesGradCheck) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    ExprGraph g;
    const Expr a = g.parameter(conditioned_matrix(rng, 4, 5.0));
    const Expr b = g.parameter(random_matrix(rng, 4, 3));
    const Expr c = g.parameter(random_matrix(rng, 3, 4));
    // a is used three times, so shared-subexpression accumulation is exercised.
    const Expr e = transpose(a * b * c) - 0.7 * inverse(a) + a;
    const Expr loss = mse(e, g.constant(random_matrix(rng, 4, 4))) + 0.3 * mse(a * a, g.identity(4));
    EXPECT_LE(finite_diff_check(g, loss).max_relative_error, 1e-4);
  }
}

TEST(MatgradTest, LinearExpressionIsExact) {
  std::mt19937_64 rng(4);
  ExprGraph g;
  const Expr x = g.parameter(random_matrix(rng, 3, 3));
  const Expr y = g.parameter(random_matrix(rng, 3, 3));
  const Expr k = g.constant(random_matrix(rng, 1, 3));
  const Expr ones = g.constant(Eigen::MatrixXd::Ones(3, 1));
  const Expr loss = k * (2.0 * x - transpose(y)) * ones;
  EXPECT_LE(finite_diff_check(g, loss).max_relative_error, 1e-7);
}

TEST(MatgradTest, IllConditionedInverseSkipsCheck) {
  std::mt19937_64 rng(5);
  ExprGraph g;
  const Expr a = g.parameter(conditioned_matrix(rng, 4, 1e9));
  const Expr loss = mse(inverse(a), g.identity(4));
  const GradCheckResult r = finite_diff_check(g, loss);
  EXPECT_TRUE(r.skipped);
  EXPECT_NE(r.warning.find("condition"), std::string::npos);
}

TEST(MatgradTest, SingularInverseNamesNode) {
  ExprGraph g;
  Eigen::MatrixXd s = Eigen::MatrixXd::Ones(3, 3);
  const Expr a = g.parameter(s);
  const Expr inv = inverse(a);
  try {
    g.evaluate(inv);
    FAIL() << "expected SingularMatrixError";
  } catch (const SingularMatrixError& e) {
    EXPECT_EQ(e.node(), inv.id());
  }
}

TEST(MatgradTest, ShapeAndContractErrors) {
  ExprGraph g;
  const Expr a = g.parameter(Eigen::MatrixXd::Zero(2, 3));
  EXPECT_THROW(a * a, ShapeError);
  EXPECT_THROW(a + transpose(a), ShapeError);
  EXPECT_THROW(inverse(a), ShapeError);
  EXPECT_THROW(g.set_value(a, Eigen::MatrixXd::Zero(3, 3)), ShapeError);
  const Expr t = transpose(a);
  g.evaluate(t);
  EXPECT_THROW(g.backward(t), ContractError);
  const Expr fresh = mse(a, a);
  EXPECT_THROW(g.backward(fresh), ContractError);
}

TEST(MatgradTest, EvaluateIsPure) {
  std::mt19937_64 rng(6);
  ExprGraph g;
  const Expr a = g.parameter(conditioned_matrix(rng, 6, 50.0));
  const Expr loss = mse(inverse(a) * a * a, g.identity(6));
  const double first = g.evaluate_scalar(loss);
  const double second = g.evaluate_scalar(loss);
  EXPECT_EQ(std::memcmp(&first, &second, sizeof(double)), 0);
}

TEST(MatgradTest, BackwardIsLinearInTheRoot) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    ExprGraph g;
    const Expr a = g.parameter(conditioned_matrix(rng, 3, 4.0));
    const Expr b = g.parameter(random_matrix(rng, 3, 3));
    const Expr f1 = mse(a * b, g.identity(3));
    const Expr f2 = mse(inverse(a), b);
    const Expr sum = f1 + f2;
    g.evaluate(sum);
    g.backward(f1);
    const Eigen::MatrixXd ga = g.grad(a), gb = g.grad(b);
    g.backward(f2);
    const Eigen::MatrixXd ha = g.grad(a), hb = g.grad(b);
    g.backward(sum);
    EXPECT_LE((g.grad(a) - ga - ha).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((g.grad(b) - gb - hb).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MatgradTest, SeededBackwardSplicesExternalGradient) {
  std::mt19937_64 rng(8);
  ExprGraph g;
  const Eigen::MatrixXd a0 = random_matrix(rng, 2, 3);
  const Eigen::MatrixXd m0 = random_matrix(rng, 3, 3);
  const Expr a = g.parameter(a0);
  const Expr m = g.parameter(m0);
  const Expr y = a * m;
  g.evaluate(y);
  const Eigen::MatrixXd seed = random_matrix(rng, 2, 3);
  g.backward({{y, seed}});
  EXPECT_LE((g.grad(m) - a0.transpose() * seed).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((g.grad(a) - seed * m0.transpose()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(MatgradTest, InverseResidualOnConditionedMatrices) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    ExprGraph g;
    const Eigen::MatrixXd a0 = conditioned_matrix(rng, 8, 1e4);
    const Eigen::MatrixXd inv = g.evaluate(inverse(g.constant(a0)));
    EXPECT_LE((a0 * inv - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(MatgradTest, CorruptedRuleIsCaught) {
  std::mt19937_64 rng(10);
  for (Op op : {Op::matmul, Op::inverse, Op::transpose, Op::frobenius_mse}) {
    ExprGraph g;
    const Expr a = g.parameter(conditioned_matrix(rng, 3, 3.0));
    const Expr loss = mse(transpose(inverse(a)) * a * a, g.constant(random_matrix(rng, 3, 3)));
    set_backward_fault(op);
    const GradCheckResult bad = finite_diff_check(g, loss);
    set_backward_fault(std::nullopt);
    EXPECT_GT(bad.max_relative_error, 1e-2) << op_name(op);
    EXPECT_LE(finite_diff_check(g, loss).max_relative_error, 1e-4);
  }
}

TEST(AdamTest, ZeroGradientLeavesParameters) {
  Adam adam(3, {.lr = 0.1});
  Eigen::VectorXd x(3);
  x << 1, -2, 3;
  const Eigen::VectorXd before = x;
  adam.step(x, Eigen::VectorXd::Zero(3));
  EXPECT_EQ(x, before);
  EXPECT_EQ(adam.steps(), 1);
}

TEST(AdamTest, FirstStepOnQuadratic) {
  Adam adam(1, {.lr = 0.1});
  Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 1.0);
  adam.step(x, 2.0 * x);
  // m_hat = g, v_hat = g^2, so the step is lr * g / (|g| + eps).
  EXPECT_NEAR(x(0), 1.0 - 0.1 * 2.0 / (2.0 + 1e-8), 1e-15);
  EXPECT_NEAR(x(0), 0.9, 1e-8);
}

TEST(AdamTest, Deterministic) {
  auto run = [] {
    Adam adam(4, {.lr = 0.01, .weight_decay = 0.1});
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(4, -1, 1);
    for (int k = 0; k < 50; ++k) adam.step(x, x.array().sin().matrix());
    return x;
  };
  EXPECT_EQ(run(), run());
}

TEST(AdamTest, DecoupledWeightDecay) {
  Adam adam(1, {.lr = 0.1, .weight_decay = 0.5});
  Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 2.0);
  adam.step(x, Eigen::VectorXd::Zero(1));
  EXPECT_DOUBLE_EQ(x(0), 2.0 * (1 - 0.1 * 0.5));
}

TEST(AdamTest, ShapeMismatch) {
  Adam adam(2, {});
  Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(adam.step(x, Eigen::VectorXd::Zero(3)), ShapeError);
  EXPECT_THROW(Adam(2, {.lr = 0}), ConfigError);
}

}  // namespace
}  // namespace grlt
