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

#ifndef PQE_RESIDUES_HPP
#define PQE_RESIDUES_HPP

#include <Eigen/Dense>

#include <atomic>
#include <cstdint>

#include "pqe/ansatz.hpp"
#include "pqe/fock.hpp"

namespace pqe {

/// Sector Hamiltonian plus the operator pool acting in the same sector.
struct Problem {
  SparseHamiltonian hamiltonian;
  OperatorPool pool;

  std::size_t size() const noexcept { return pool.size(); }
};

Problem make_problem(const SpinOrbitalIntegrals& ints, int max_rank);

enum class MeasurementSite { residue_sweep, line_search, energy, gradient };

struct LedgerSnapshot {
  std::uint64_t residue_sweep = 0;
  std::uint64_t line_search = 0;
  std::uint64_t energy = 0;
  std::uint64_t gradient = 0;

  std::uint64_t total() const noexcept {
    return residue_sweep + line_search + energy + gradient;
  }
  LedgerSnapshot operator-(const LedgerSnapshot& o) const noexcept {
    return {residue_sweep - o.residue_sweep, line_search - o.line_search,
            energy - o.energy, gradient - o.gradient};
  }
};

/// Counts energy expectation values <Psi|H|Psi>, the cost unit of every
/// optimizer here. Thread-safe.
class MeasurementLedger {
public:
  void charge(MeasurementSite site, std::uint64_t n = 1) noexcept;
  LedgerSnapshot snapshot() const noexcept;
  std::uint64_t total() const noexcept { return snapshot().total(); }

private:
  std::atomic<std::uint64_t> sweep_{0}, line_search_{0}, energy_{0}, gradient_{0};
};

struct ResidueEvaluation {
  Eigen::VectorXd r;     // r_mu(t)
  double E = 0.0;        // E(t)
  Eigen::VectorXd E_mu;  // <Phi_mu|U+ H U|Phi_mu>
};

/// E(t); charges one measurement to `site`.
double energy(const Problem& p, const Eigen::VectorXd& t, MeasurementLedger& ledger,
              MeasurementSite site = MeasurementSite::energy);

/// Residues from 2N+1 energies: r_mu = E^{pi/4}_mu - E_mu/2 - E/2, where
/// E^{pi/4}_mu is measured on U(t) exp(pi/4 kappa_mu)|Phi0> and E_mu on
/// U(t)|Phi_mu>. Charges 2N+1.
ResidueEvaluation residue_sweep(const Problem& p, const Eigen::VectorXd& t,
                                MeasurementLedger& ledger);

/// <Phi_mu|U+ H U|Phi0> by explicit projection. Oracle, not charged.
Eigen::VectorXd residue_direct(const Problem& p, const Eigen::VectorXd& t);

/// ||H Psi||^2 - E^2: the sum of squared residues over the whole sector.
/// Oracle, not charged.
double variance_full(const Problem& p, const Eigen::VectorXd& t);

struct EnergyGradient {
  double E = 0.0;
  Eigen::VectorXd grad;
};

/// Exact dE/dt by reverse-mode sweep through the product ansatz. Not charged;
/// callers account for it.
EnergyGradient energy_gradient(const Problem& p, const Eigen::VectorXd& t);

}  // namespace pqe

#endif  // PQE_RESIDUES_HPP
