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

#include <cmath>
#include <random>

#include "oracles/jw_oracle.hpp"
#include "pqe/ansatz.hpp"
#include "test_support.hpp"

namespace {

using testing_support::fixture;
using testing_support::random_vector;

pqe::OperatorPool pool_for(const pqe::SpinOrbitalIntegrals& ints, int rank) {
  return pqe::generate_pool(ints, pqe::make_reference_sector(ints), rank);
}

TEST(Pool, SizesForKnownSystems) {
  EXPECT_EQ(pool_for(fixture("h2", 0.7414).ints, 2).size(), 3u);
  EXPECT_EQ(pool_for(fixture("h4", 1.0).ints, 2).size(), 26u);
  // The complete pool spans every other determinant in the sector.
  const auto ints = fixture("h4", 1.0).ints;
  const auto full = pool_for(ints, 4);
  EXPECT_EQ(full.size(), full.basis->size() - 1);
  EXPECT_EQ(pool_for(fixture("lih", 1.5).ints, 2).size(), 92u);
}

TEST(Pool, BlocksAreOrderedByRankThenLexicographic) {
  const auto pool = pool_for(fixture("h4", 1.0).ints, 3);
  for (std::size_t mu = 1; mu < pool.size(); ++mu) {
    const auto& a = pool.ops[mu - 1];
    const auto& b = pool.ops[mu];
    ASSERT_LE(a.rank, b.rank);
    if (a.rank == b.rank)
      ASSERT_TRUE(std::pair(a.occupied, a.virt) < std::pair(b.occupied, b.virt));
  }
}

TEST(Pool, ExcitationsConserveSpin) {
  const auto pool = pool_for(fixture("h4", 1.0).ints, 2);
  for (const auto& op : pool.ops) {
    int sz = 0;
    for (int i : op.occupied) sz -= (i % 2 == 0) ? 1 : -1;
    for (int a : op.virt) sz += (a % 2 == 0) ? 1 : -1;
    EXPECT_EQ(sz, 0) << op.label();
  }
}

TEST(Pool, MollerPlessetDenominator) {
  const auto ints = fixture("h2", 0.7414).ints;
  const auto pool = pool_for(ints, 2);
  const auto& dbl = pool.ops.back();
  ASSERT_EQ(dbl.rank, 2);
  const auto& e = ints.orbital_energies;
  EXPECT_NEAR(dbl.delta_mp, e(0) + e(1) - e(2) - e(3), 1e-15);
  EXPECT_LT(dbl.delta_mp, 0.0);
}

TEST(Pool, RejectsBadRank) {
  const auto ints = fixture("h2", 0.7414).ints;
  EXPECT_THROW(pool_for(ints, 0), std::invalid_argument);
  EXPECT_THROW(pool_for(ints, 5), std::invalid_argument);
}

TEST(Kappa, MatchesDenseOperator) {
  const auto ints = fixture("h4", 1.0).ints;
  const auto pool = pool_for(ints, 4);
  const oracle::Operators ops(ints.m);
  std::mt19937_64 rng(11);
  Eigen::VectorXd psi = random_vector(static_cast<Eigen::Index>(pool.basis->size()), rng, 1);
  const Eigen::VectorXd full = oracle::embed(*pool.basis, psi, ops);
  for (const auto& op : pool.ops) {
    const Eigen::VectorXd ref = oracle::restrict_to(*pool.basis, oracle::kappa(op, ops) * full, ops);
    ASSERT_LT((pqe::apply_kappa(psi, op) - ref).cwiseAbs().maxCoeff(), 1e-14) << op.label();
  }
}

TEST(Kappa, ExcitedStateIsKappaOnReference) {
  const auto pool = pool_for(fixture("h4", 1.0).ints, 2);
  const Eigen::VectorXd ref = pool.reference_state().amp;
  for (std::size_t mu = 0; mu < pool.size(); ++mu) {
    const Eigen::VectorXd phi = pool.excited_state(mu);
    EXPECT_LT((phi - pqe::apply_kappa(ref, pool.ops[mu])).norm(), 1e-15);
    EXPECT_NEAR(phi.norm(), 1.0, 1e-15);
  }
}

TEST(ExpKappa, ClosedFormAndDenseExponential) {
  const auto ints = fixture("h4", 1.0).ints;
  const auto pool = pool_for(ints, 2);
  const oracle::Operators ops(ints.m);
  std::mt19937_64 rng(5);
  Eigen::VectorXd psi = random_vector(static_cast<Eigen::Index>(pool.basis->size()), rng, 1);
  psi.normalize();
  for (double t : {0.3, -1.1, 2.7}) {
    for (std::size_t mu : {std::size_t{0}, std::size_t{5}, pool.size() - 1}) {
      const auto& op = pool.ops[mu];
      Eigen::VectorXd got = psi;
      pqe::apply_exp_kappa_inplace(got, op, t);
      // kappa^3 = -kappa on its support.
      const Eigen::VectorXd k1 = pqe::apply_kappa(psi, op);
      const Eigen::VectorXd k2 = pqe::apply_kappa(k1, op);
      const Eigen::VectorXd closed = psi + std::sin(t) * k1 + (1 - std::cos(t)) * k2;
      EXPECT_LT((got - closed).cwiseAbs().maxCoeff(), 1e-14);
      const oracle::Dense K = t * oracle::kappa(op, ops);
      const oracle::Dense E = K.exp();
      const Eigen::VectorXd dense = oracle::restrict_to(
          *pool.basis, E * oracle::embed(*pool.basis, psi, ops), ops);
      EXPECT_LT((got - dense).cwiseAbs().maxCoeff(), 1e-13);
    }
  }
}

void expect_ansatz_matches_oracle(const pqe::SpinOrbitalIntegrals& ints, int rank) {
  const auto pool = pool_for(ints, rank);
  const oracle::Operators ops(ints.m);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 3; ++trial) {
    const Eigen::VectorXd t = random_vector(static_cast<Eigen::Index>(pool.size()), rng, 0.8);
    const Eigen::VectorXd got = pqe::prepare_state(pool, t).amp;
    const Eigen::VectorXd ref = oracle::restrict_to(
        *pool.basis,
        oracle::ucc_unitary(pool, t, ops) *
            oracle::embed(*pool.basis, pool.reference_state().amp, ops),
        ops);
    EXPECT_LT((got - ref).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Ansatz, MatchesDenseProductH2) { expect_ansatz_matches_oracle(fixture("h2", 0.7414).ints, 2); }

TEST(Ansatz, MatchesDenseProductH4) { expect_ansatz_matches_oracle(fixture("h4", 1.0).ints, 2); }

TEST(Ansatz, AdjointInverts) {
  const auto pool = pool_for(fixture("h4", 1.5).ints, 3);
  std::mt19937_64 rng(23);
  const Eigen::VectorXd t = random_vector(static_cast<Eigen::Index>(pool.size()), rng, 1.0);
  Eigen::VectorXd psi = random_vector(static_cast<Eigen::Index>(pool.basis->size()), rng, 1);
  const Eigen::VectorXd orig = psi;
  pqe::apply_ansatz_inplace(psi, pool, t);
  pqe::apply_ansatz_adjoint_inplace(psi, pool, t);
  EXPECT_LT((psi - orig).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Ansatz, ZeroAmplitudesGiveReference) {
  const auto pool = pool_for(fixture("lih", 1.5).ints, 2);
  const auto psi = pqe::prepare_state(pool, Eigen::VectorXd::Zero(pool.size()));
  EXPECT_EQ((psi.amp - pool.reference_state().amp).norm(), 0.0);
}

TEST(Ansatz, NormPreservedOverManyApplications) {
  const auto pool = pool_for(fixture("h4", 1.0).ints, 2);
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> angle(-3.2, 3.2);
  Eigen::VectorXd psi = pool.reference_state().amp;
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    pqe::apply_exp_kappa_inplace(psi, pool.ops[pick(rng)], angle(rng));
    worst = std::max(worst, std::abs(psi.norm() - 1.0));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Ansatz, WrongLengthThrows) {
  const auto pool = pool_for(fixture("h2", 0.7414).ints, 2);
  EXPECT_THROW(pqe::prepare_state(pool, Eigen::VectorXd::Zero(2)), pqe::DimensionError);
}

}  // namespace
