// Copyright 2026 The pqelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

#include "pqe/bounds.hpp"

namespace {

struct Moments {
  double E;
  double var;
};

Moments moments(const Eigen::MatrixXd& A, const Eigen::VectorXd& x) {
  const Eigen::VectorXd Ax = A * x;
  const double e = x.dot(Ax);
  return {e, Ax.squaredNorm() - e * e};
}

Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = g(rng);
  return 0.5 * (A + A.transpose());
}

TEST(Temple, BracketsGroundStateOfSmallMatrices) {
  std::mt19937_64 rng(101);
  int applicable = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::MatrixXd A = random_symmetric(3, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const double e0 = es.eigenvalues()(0), e1 = es.eigenvalues()(1);
    // Trial vector near the ground state.
    Eigen::VectorXd x = es.eigenvectors().col(0) + 0.3 * Eigen::VectorXd::Random(3);
    x.normalize();
    const auto [E, var] = moments(A, x);
    const auto b = pqe::temple_bracket(E, var, e1);
    if (!b) {
      EXPECT_GE(E, e1);
      continue;
    }
    ++applicable;
    EXPECT_LE(b->lower, e0 + 1e-12);
    EXPECT_GE(b->upper, e0 - 1e-12);
  }
  EXPECT_GT(applicable, 300);
}

TEST(Temple, InapplicableAboveExcitedLevel) {
  EXPECT_FALSE(pqe::temple_bracket(1.0, 0.1, 0.5));
  EXPECT_FALSE(pqe::temple_error(0.5, 0.1, 0.5));
  EXPECT_NEAR(*pqe::temple_error(0.0, 0.2, 1.0), 0.2, 1e-16);
}

TEST(Kato, BracketsEigenvalueInIsolatingInterval) {
  std::mt19937_64 rng(103);
  int applicable = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::MatrixXd A = random_symmetric(3, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const Eigen::Vector3d ev = es.eigenvalues();
    // Target the middle eigenvalue, isolated by its neighbours.
    Eigen::VectorXd x = es.eigenvectors().col(1) + 0.1 * Eigen::VectorXd::Random(3);
    x.normalize();
    const auto [E, var] = moments(A, x);
    const auto b = pqe::kato_bracket(E, var, ev(0), ev(2));
    if (!b) continue;
    ++applicable;
    EXPECT_LE(b->lower, ev(1) + 1e-12);
    EXPECT_GE(b->upper, ev(1) - 1e-12);
  }
  EXPECT_GT(applicable, 100);
}

TEST(Kato, MinusInfinityReducesToTemple) {
  const double inf = std::numeric_limits<double>::infinity();
  const auto k = pqe::kato_bracket(-1.0, 0.04, -inf, 0.5);
  const auto t = pqe::temple_bracket(-1.0, 0.04, 0.5);
  ASSERT_TRUE(k && t);
  EXPECT_DOUBLE_EQ(k->lower, t->lower);
  EXPECT_DOUBLE_EQ(k->upper, t->upper);
}

TEST(Kato, RejectsWhenResidualTooLarge) {
  EXPECT_FALSE(pqe::kato_bracket(0.0, 1.0, -0.5, 0.5));
  EXPECT_FALSE(pqe::kato_bracket(1.0, 0.0, -0.5, 0.5));
}

TEST(Overlap, LowerBoundsTrueOverlap) {
  std::mt19937_64 rng(107);
  int applicable = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::MatrixXd A = random_symmetric(6, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    const double e0 = es.eigenvalues()(0), e1 = es.eigenvalues()(1);
    Eigen::VectorXd x = es.eigenvectors().col(0) + 0.2 * Eigen::VectorXd::Random(6);
    x.normalize();
    const auto [E, var] = moments(A, x);
    const auto lb = pqe::overlap_lower_bound(var, E, e0, e1);
    if (!lb) continue;
    ++applicable;
    const double ov = std::pow(x.dot(es.eigenvectors().col(0)), 2);
    EXPECT_LE(*lb, ov + 1e-12);
  }
  EXPECT_GT(applicable, 300);
}

TEST(Practical, FlagsNonDescent) {
  const auto ok = pqe::practical_criterion(1e-6, -1.0, -1.1);
  EXPECT_FALSE(ok.flagged);
  EXPECT_NEAR(ok.value, 1e-5, 1e-18);
  EXPECT_TRUE(pqe::practical_criterion(1e-6, -1.0, -1.0).flagged);
  EXPECT_TRUE(pqe::practical_criterion(1e-6, -1.0, -0.9).flagged);
  EXPECT_EQ(pqe::practical_criterion(0.0, -1.0, -1.0).value, 0.0);
  const Eigen::Vector2d r(3e-4, 4e-4);
  EXPECT_NEAR(pqe::practical_criterion(r, 0.0, -0.5).value, 5e-7, 1e-20);
  EXPECT_NEAR(pqe::residual_one_norm(r), 7e-4, 1e-18);
}

TEST(Practical, CertificatesReportApplicability) {
  EXPECT_TRUE(pqe::exact_temple_certificate(-1.0, 1e-4, 0.0).applicable());
  EXPECT_FALSE(pqe::exact_temple_certificate(1.0, 1e-4, 0.0).applicable());
  EXPECT_FALSE(pqe::practical_certificate(-1.0, 1e-4, -1.0).applicable());
  EXPECT_EQ(pqe::practical_certificate(-1.1, 1e-4, -1.0).kind, pqe::CertificateKind::practical_A);
}

TEST(Kantorovich, RateFormula) {
  const auto r = pqe::nk_rate(0.375);
  ASSERT_TRUE(r);
  EXPECT_NEAR(r->q, 0.5, 1e-15);
  EXPECT_NEAR(r->gamma_lb, std::numbers::ln2, 1e-15);
  EXPECT_FALSE(pqe::nk_rate(0.5));
  EXPECT_FALSE(pqe::nk_rate(0.3, 2.0));
  EXPECT_TRUE(pqe::nk_rate(0.3, 1.5));
  EXPECT_NEAR(*pqe::homo_lumo_rate_bound(0.375, 1.0), 0.5, 1e-15);
  EXPECT_FALSE(pqe::homo_lumo_rate_bound(0.6, 1.0));
}

TEST(Bounds, SinglePrecisionInstantiates) {
  const auto b = pqe::temple_bracket(-1.0f, 0.01f, 0.0f);
  ASSERT_TRUE(b);
  EXPECT_FLOAT_EQ(b->lower, -1.01f);
  EXPECT_TRUE(pqe::nk_rate(0.25f));
}

}  // namespace
