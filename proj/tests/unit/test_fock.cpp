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

#include <algorithm>
#include <random>

#include "oracles/jw_oracle.hpp"
#include "pqe/fock.hpp"
#include "test_support.hpp"

namespace {

using testing_support::fixture;

TEST(Determinant, ReferenceFillsLowestModes) {
  const auto d = pqe::reference_determinant(4);
  EXPECT_EQ(d.occ, 0b1111u);
  EXPECT_EQ(d.count(), 4);
  EXPECT_EQ(d.sz_twice(), 0);
  EXPECT_EQ(pqe::Determinant{0b0101}.sz_twice(), 2);
}

TEST(Excitation, SignsMatchJordanWignerMatrices) {
  const int m = 6;
  const oracle::Operators ops(m);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> mode(0, m - 1);
  std::uniform_int_distribution<std::uint64_t> bits(0, (1u << m) - 1);
  for (int trial = 0; trial < 400; ++trial) {
    const pqe::Determinant det{bits(rng)};
    const int k = 1 + trial % 2;
    std::vector<int> create, annihilate;
    for (int i = 0; i < k; ++i) {
      create.push_back(mode(rng));
      annihilate.push_back(mode(rng));
    }
    // Dense a+_{c0} a+_{c1} ... a_{a1} a_{a0}.
    oracle::Dense T = oracle::Dense::Identity(ops.dim(), ops.dim());
    for (int c : create) T = T * ops.ad[c];
    for (auto it = annihilate.rbegin(); it != annihilate.rend(); ++it) T = T * ops.a[*it];
    Eigen::VectorXd in = Eigen::VectorXd::Zero(ops.dim());
    in(oracle::fock_index(det.occ, m)) = 1.0;
    const Eigen::VectorXd out = T * in;

    const auto got = pqe::apply_excitation(det, create, annihilate);
    if (!got) {
      EXPECT_EQ(out.cwiseAbs().maxCoeff(), 0.0);
      continue;
    }
    Eigen::VectorXd expect = Eigen::VectorXd::Zero(ops.dim());
    expect(oracle::fock_index(got->det.occ, m)) = got->sign;
    ASSERT_EQ((out - expect).cwiseAbs().maxCoeff(), 0.0) << "trial " << trial;
  }
}

TEST(SectorBasis, CountsAndOrdering) {
  const pqe::SectorBasis b(8, 4, 0);
  EXPECT_EQ(b.size(), 36u);  // C(4,2)^2
  EXPECT_TRUE(std::is_sorted(b.states().begin(), b.states().end()));
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_EQ(b[i].count(), 4);
    EXPECT_EQ(b[i].sz_twice(), 0);
    EXPECT_EQ(b.index(b[i]), i);
  }
  EXPECT_FALSE(b.find(pqe::Determinant{0b1}));
  EXPECT_THROW(b.index(pqe::Determinant{0b1}), pqe::DimensionError);
}

TEST(SectorBasis, RejectsImpossibleSector) {
  EXPECT_THROW(pqe::SectorBasis(4, 5, 1), pqe::DimensionError);
  EXPECT_EQ(pqe::SectorBasis(4, 2, 1).size(), 0u);  // parity mismatch
}

void expect_matches_oracle(const pqe::SpinOrbitalIntegrals& ints) {
  const oracle::Operators ops(ints.m);
  const oracle::Dense full = oracle::hamiltonian(ints, ops);
  const auto basis = pqe::make_reference_sector(ints);
  const auto H = pqe::build_hamiltonian(ints, basis);
  const Eigen::MatrixXd sparse_dense = Eigen::MatrixXd(H.matrix);
  const auto n = static_cast<Eigen::Index>(basis->size());
  Eigen::MatrixXd ref(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      ref(i, j) = full(oracle::fock_index((*basis)[static_cast<std::size_t>(i)].occ, ints.m),
                       oracle::fock_index((*basis)[static_cast<std::size_t>(j)].occ, ints.m));
  EXPECT_LT((sparse_dense - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Hamiltonian, MatchesJordanWignerOracleH2) { expect_matches_oracle(fixture("h2", 0.7414).ints); }

TEST(Hamiltonian, MatchesJordanWignerOracleH4) { expect_matches_oracle(fixture("h4", 1.5).ints); }

TEST(Hamiltonian, IsSymmetric) {
  const auto ints = fixture("lih", 1.5).ints;
  const auto H = pqe::build_hamiltonian(ints, pqe::make_reference_sector(ints));
  const Eigen::SparseMatrix<double> Ht = H.matrix.transpose();
  EXPECT_LT((Eigen::SparseMatrix<double>(H.matrix) - Ht).norm(), 1e-12);
}

TEST(Hamiltonian, ReferenceDiagonalIsHartreeFockEnergy) {
  const auto fx = fixture("beh2", 2.0);
  const auto basis = pqe::make_reference_sector(fx.ints);
  const auto H = pqe::build_hamiltonian(fx.ints, basis);
  const auto ref = basis->index(pqe::reference_determinant(fx.ints.n_electrons));
  EXPECT_NEAR(H.matrix.coeff(static_cast<Eigen::Index>(ref), static_cast<Eigen::Index>(ref)),
              *fx.meta->hf_energy, 1e-9);
}

TEST(Hamiltonian, MatvecAndExpectation) {
  const auto ints = fixture("h4", 1.0).ints;
  const auto H = pqe::build_hamiltonian(ints, pqe::make_reference_sector(ints));
  std::mt19937_64 rng(3);
  Eigen::VectorXd x = testing_support::random_vector(static_cast<Eigen::Index>(H.dim()), rng, 1);
  x.normalize();
  const Eigen::VectorXd hx = pqe::matvec(H, x);
  EXPECT_LT((hx - Eigen::MatrixXd(H.matrix) * x).norm(), 1e-12);
  EXPECT_NEAR(pqe::expectation(H, x), x.dot(hx), 1e-12);
  EXPECT_THROW(pqe::matvec(H, Eigen::VectorXd::Zero(3)), pqe::DimensionError);
}

}  // namespace
