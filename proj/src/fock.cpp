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

#include "pqe/fock.hpp"

#include <fmt/format.h>

#include <algorithm>

namespace pqe {

namespace {

// Parity of occupied modes strictly below p.
inline int jw_sign(std::uint64_t occ, int p) {
  const std::uint64_t below = p == 0 ? 0 : (occ & ((1ULL << p) - 1));
  return (std::popcount(below) & 1) ? -1 : 1;
}

}  // namespace

std::optional<SignedDeterminant> apply_excitation(Determinant det,
                                                  std::span<const int> create,
                                                  std::span<const int> annihilate) {
  std::uint64_t occ = det.occ;
  int sign = 1;
  for (int p : annihilate) {
    const std::uint64_t bit = 1ULL << p;
    if (!(occ & bit)) return std::nullopt;
    sign *= jw_sign(occ, p);
    occ &= ~bit;
  }
  for (auto it = create.rbegin(); it != create.rend(); ++it) {
    const std::uint64_t bit = 1ULL << *it;
    if (occ & bit) return std::nullopt;
    sign *= jw_sign(occ, *it);
    occ |= bit;
  }
  return SignedDeterminant{Determinant{occ}, sign};
}

SectorBasis::SectorBasis(int m, int n_electrons, int sz_twice)
    : m_(m), n_electrons_(n_electrons), sz_twice_(sz_twice) {
  if (m < 0 || m > 64) throw DimensionError("spin-orbital count must be in [0, 64]");
  if (n_electrons < 0 || n_electrons > m)
    throw DimensionError(
        fmt::format("{} electrons do not fit in {} spin-orbitals", n_electrons, m));
  if (n_electrons == 0) {
    if (sz_twice == 0) states_.push_back(Determinant{0});
    return;
  }
  // Gosper's hack walks all m-bit patterns with n bits set in increasing order.
  std::uint64_t x = (n_electrons == 64) ? ~0ULL : ((1ULL << n_electrons) - 1);
  const std::uint64_t limit_bit = m == 64 ? 0 : (1ULL << m);
  while (true) {
    if (m < 64 && (x & ~(limit_bit - 1))) break;
    Determinant d{x};
    if (d.sz_twice() == sz_twice) states_.push_back(d);
    const std::uint64_t c = x & (~x + 1);
    const std::uint64_t r = x + c;
    if (r == 0) break;  // overflow: last pattern on 64 bits
    x = (((r ^ x) >> 2) / c) | r;
  }
}

std::optional<std::size_t> SectorBasis::find(Determinant d) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), d);
  if (it == states_.end() || *it != d) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

std::size_t SectorBasis::index(Determinant d) const {
  if (auto i = find(d)) return *i;
  throw DimensionError(fmt::format("determinant {:#x} is not in the sector", d.occ));
}

BasisPtr make_reference_sector(const SpinOrbitalIntegrals& ints) {
  const Determinant ref = reference_determinant(ints.n_electrons);
  return std::make_shared<const SectorBasis>(ints.m, ints.n_electrons,
                                             ref.sz_twice());
}

StateVector StateVector::basis_state(BasisPtr basis, std::size_t index) {
  StateVector s{std::move(basis), {}};
  s.amp = Eigen::VectorXd::Unit(static_cast<Eigen::Index>(s.basis->size()),
                                static_cast<Eigen::Index>(index));
  return s;
}

SparseHamiltonian build_hamiltonian(const SpinOrbitalIntegrals& ints,
                                    BasisPtr basis) {
  if (basis->m() != ints.m)
    throw DimensionError(fmt::format(
        "basis has {} spin-orbitals, integrals have {}", basis->m(), ints.m));
  const SectorBasis& B = *basis;
  const int m = ints.m;
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<int> occ, vir;

  for (std::size_t col = 0; col < B.size(); ++col) {
    const Determinant d = B[col];
    occ.clear();
    vir.clear();
    for (int p = 0; p < m; ++p) (d.occupied(p) ? occ : vir).push_back(p);

    double diag = ints.e_core;
    for (int i : occ) {
      diag += ints.h(i, i);
      for (int j : occ)
        diag += 0.5 * (ints.two_body(i, j, i, j) - ints.two_body(i, j, j, i));
    }
    trip.emplace_back(static_cast<int>(col), static_cast<int>(col), diag);

    // singles a+_a a_i
    for (int i : occ)
      for (int a : vir) {
        if ((i & 1) != (a & 1)) continue;
        const int c[1] = {a}, n[1] = {i};
        auto ex = apply_excitation(d, c, n);
        auto row = B.find(ex->det);
        if (!row) continue;
        double val = ints.h(a, i);
        for (int j : occ)
          if (j != i) val += ints.two_body(a, j, i, j) - ints.two_body(a, j, j, i);
        if (val != 0.0)
          trip.emplace_back(static_cast<int>(*row), static_cast<int>(col),
                            ex->sign * val);
      }

    // doubles a+_p a+_q a_s a_r, p<q, r<s
    for (std::size_t x = 0; x < occ.size(); ++x)
      for (std::size_t y = x + 1; y < occ.size(); ++y) {
        const int r = occ[x], s = occ[y];
        for (std::size_t u = 0; u < vir.size(); ++u)
          for (std::size_t w = u + 1; w < vir.size(); ++w) {
            const int p = vir[u], q = vir[w];
            if (((p & 1) + (q & 1)) != ((r & 1) + (s & 1))) continue;
            const int c[2] = {p, q}, n[2] = {r, s};
            auto ex = apply_excitation(d, c, n);
            auto row = B.find(ex->det);
            if (!row) continue;
            const double val = ints.two_body(p, q, r, s) - ints.two_body(p, q, s, r);
            if (val != 0.0)
              trip.emplace_back(static_cast<int>(*row), static_cast<int>(col),
                                ex->sign * val);
          }
      }
  }

  SparseHamiltonian H{std::move(basis), {}};
  const auto dim = static_cast<Eigen::Index>(H.basis->size());
  H.matrix.resize(dim, dim);
  H.matrix.setFromTriplets(trip.begin(), trip.end());
  H.matrix.makeCompressed();
  return H;
}

Eigen::VectorXd matvec(const SparseHamiltonian& H, const Eigen::VectorXd& x) {
  if (x.size() != H.matrix.cols())
    throw DimensionError(fmt::format("vector of length {} for a {}-dim sector",
                                     x.size(), H.matrix.cols()));
  return H.matrix * x;
}

Eigen::VectorXd matvec(const SparseHamiltonian& H, const StateVector& x) {
  if (x.basis && !(*x.basis == *H.basis))
    throw DimensionError("state and Hamiltonian live in different sectors");
  return matvec(H, x.amp);
}

double expectation(const SparseHamiltonian& H, const Eigen::VectorXd& x) {
  return x.dot(matvec(H, x));
}

}  // namespace pqe
