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

#ifndef PQE_ANSATZ_HPP
#define PQE_ANSATZ_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "pqe/fock.hpp"
#include "pqe/integrals.hpp"

namespace pqe {

/// tau|src> = sign |dst> for one determinant pair connected by an excitation.
struct Rotation {
  std::uint32_t src;
  std::uint32_t dst;
  double sign;
};

/**
 * Generator kappa = tau - tau^+ with tau = a+_a a+_b ... a_j a_i.
 *
 * `rotations` is tau compiled against the sector basis. Since the source and
 * target determinant sets are disjoint, kappa acts as a plane rotation on each
 * pair and exp(t kappa) has a closed form.
 */
struct ExcitationOp {
  std::vector<int> occupied;  // i < j < ...
  std::vector<int> virt;      // a < b < ...
  int rank = 0;
  double delta_mp = 0.0;  // sum eps_occ - sum eps_virt
  std::size_t partner = 0;  // index of kappa|Phi0> in the basis
  double partner_sign = 1.0;
  std::vector<Rotation> rotations;

  std::string label() const;
};

/// Ordered pool; ops[0] is the leftmost factor of U(t) = prod_mu exp(t_mu kappa_mu).
struct OperatorPool {
  BasisPtr basis;
  std::size_t reference = 0;
  std::vector<ExcitationOp> ops;

  std::size_t size() const noexcept { return ops.size(); }
  StateVector reference_state() const {
    return StateVector::basis_state(basis, reference);
  }
  /// |Phi_mu> = kappa_mu |Phi0>, sign included.
  Eigen::VectorXd excited_state(std::size_t mu) const;
};

/// Compiles tau for the given occupied/virtual lists against the basis.
ExcitationOp make_excitation(const SectorBasis& basis, std::size_t reference,
                             std::vector<int> occupied, std::vector<int> virt,
                             const Eigen::VectorXd& orbital_energies);

/// All N- and Sz-conserving particle-hole excitations of the reference up to
/// `max_rank` (1..4). Singles block first, then doubles, etc.; lexicographic
/// in (occupied, virtual) within a block.
OperatorPool generate_pool(const SpinOrbitalIntegrals& ints, BasisPtr basis,
                           int max_rank);

/// kappa psi.
Eigen::VectorXd apply_kappa(const Eigen::VectorXd& psi, const ExcitationOp& op);

/// psi <- exp(t kappa) psi, in place.
void apply_exp_kappa_inplace(Eigen::VectorXd& psi, const ExcitationOp& op, double t);

StateVector apply_exp_kappa(const StateVector& psi, const ExcitationOp& op, double t);

/// U(t) psi: the last pool factor acts first.
void apply_ansatz_inplace(Eigen::VectorXd& psi, const OperatorPool& pool,
                          const Eigen::VectorXd& t);

/// U(t)^+ psi.
void apply_ansatz_adjoint_inplace(Eigen::VectorXd& psi, const OperatorPool& pool,
                                  const Eigen::VectorXd& t);

/// U(t)|Phi0>.
StateVector prepare_state(const OperatorPool& pool, const Eigen::VectorXd& t);

}  // namespace pqe

#endif  // PQE_ANSATZ_HPP
