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

#ifndef PQE_FOCK_HPP
#define PQE_FOCK_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <bit>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pqe/integrals.hpp"

namespace pqe {

/// Basis or dimension mismatch between objects that must share a sector.
class DimensionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Occupation-number vector over at most 64 spin-orbitals; bit p set means
/// spin-orbital p is occupied.
struct Determinant {
  std::uint64_t occ = 0;

  constexpr bool occupied(int p) const noexcept { return (occ >> p) & 1U; }
  constexpr int count() const noexcept { return std::popcount(occ); }
  /// Twice the Sz value; alpha orbitals sit on even bits.
  constexpr int sz_twice() const noexcept {
    constexpr std::uint64_t alpha_mask = 0x5555555555555555ULL;
    return std::popcount(occ & alpha_mask) - std::popcount(occ & ~alpha_mask);
  }

  friend constexpr auto operator<=>(Determinant, Determinant) = default;
};

/// Determinant with the n lowest spin-orbitals filled.
constexpr Determinant reference_determinant(int n_electrons) noexcept {
  return Determinant{n_electrons >= 64 ? ~0ULL : ((1ULL << n_electrons) - 1)};
}

struct SignedDeterminant {
  Determinant det;
  int sign = 1;
};

/// Applies a+_{c0} a+_{c1} ... a_{a1} a_{a0} (annihilators act first, in list
/// order; creators then act from the back of the list). Returns nullopt when
/// the product vanishes on `det`.
std::optional<SignedDeterminant> apply_excitation(Determinant det,
                                                  std::span<const int> create,
                                                  std::span<const int> annihilate);

/// All determinants with a fixed electron count and Sz, in ascending order
/// of their occupation bit pattern.
class SectorBasis {
public:
  SectorBasis(int m, int n_electrons, int sz_twice);

  int m() const noexcept { return m_; }
  int n_electrons() const noexcept { return n_electrons_; }
  int sz_twice() const noexcept { return sz_twice_; }
  std::size_t size() const noexcept { return states_.size(); }
  const std::vector<Determinant>& states() const noexcept { return states_; }
  Determinant operator[](std::size_t i) const { return states_[i]; }

  std::optional<std::size_t> find(Determinant d) const;
  std::size_t index(Determinant d) const;  // throws if absent

  bool operator==(const SectorBasis& o) const {
    return m_ == o.m_ && n_electrons_ == o.n_electrons_ &&
           sz_twice_ == o.sz_twice_;
  }

private:
  int m_;
  int n_electrons_;
  int sz_twice_;
  std::vector<Determinant> states_;
};

using BasisPtr = std::shared_ptr<const SectorBasis>;

/// Sector containing the reference determinant of `ints`.
BasisPtr make_reference_sector(const SpinOrbitalIntegrals& ints);

struct StateVector {
  BasisPtr basis;
  Eigen::VectorXd amp;

  static StateVector basis_state(BasisPtr basis, std::size_t index);
  double norm() const { return amp.norm(); }
};

struct SparseHamiltonian {
  BasisPtr basis;
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;

  std::size_t dim() const { return basis->size(); }
};

/// Matrix of H in the sector via Slater-Condon rules (e_core on the diagonal).
SparseHamiltonian build_hamiltonian(const SpinOrbitalIntegrals& ints,
                                    BasisPtr basis);

Eigen::VectorXd matvec(const SparseHamiltonian& H, const StateVector& x);
Eigen::VectorXd matvec(const SparseHamiltonian& H, const Eigen::VectorXd& x);

/// <x|H|x> for a normalized x.
double expectation(const SparseHamiltonian& H, const Eigen::VectorXd& x);

}  // namespace pqe

#endif  // PQE_FOCK_HPP
