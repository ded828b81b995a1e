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

#include "pqe/residues.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>

namespace pqe {

Problem make_problem(const SpinOrbitalIntegrals& ints, int max_rank) {
  BasisPtr basis = make_reference_sector(ints);
  Problem p{build_hamiltonian(ints, basis), generate_pool(ints, basis, max_rank)};
  return p;
}

void MeasurementLedger::charge(MeasurementSite site, std::uint64_t n) noexcept {
  switch (site) {
    case MeasurementSite::residue_sweep: sweep_ += n; break;
    case MeasurementSite::line_search: line_search_ += n; break;
    case MeasurementSite::energy: energy_ += n; break;
    case MeasurementSite::gradient: gradient_ += n; break;
  }
}

LedgerSnapshot MeasurementLedger::snapshot() const noexcept {
  return {sweep_.load(), line_search_.load(), energy_.load(), gradient_.load()};
}

namespace {

void check_length(const Problem& p, const Eigen::VectorXd& t) {
  if (static_cast<std::size_t>(t.size()) != p.size())
    throw DimensionError(
        fmt::format("{} amplitudes for a pool of {}", t.size(), p.size()));
}

}  // namespace

double energy(const Problem& p, const Eigen::VectorXd& t, MeasurementLedger& ledger,
              MeasurementSite site) {
  check_length(p, t);
  const StateVector psi = prepare_state(p.pool, t);
  ledger.charge(site);
  return expectation(p.hamiltonian, psi.amp);
}

ResidueEvaluation residue_sweep(const Problem& p, const Eigen::VectorXd& t,
                                MeasurementLedger& ledger) {
  check_length(p, t);
  const auto n = static_cast<Eigen::Index>(p.size());
  ResidueEvaluation out;
  out.r.resize(n);
  out.E_mu.resize(n);

  Eigen::VectorXd psi = p.pool.reference_state().amp;
  apply_ansatz_inplace(psi, p.pool, t);
  out.E = expectation(p.hamiltonian, psi);

  const Eigen::VectorXd ref = p.pool.reference_state().amp;
  for (Eigen::Index mu = 0; mu < n; ++mu) {
    const ExcitationOp& op = p.pool.ops[static_cast<std::size_t>(mu)];
    // U(t) exp(pi/4 kappa_mu)|Phi0>: the pi/4 rotation acts first.
    Eigen::VectorXd a = ref;
    apply_exp_kappa_inplace(a, op, std::numbers::pi / 4);
    apply_ansatz_inplace(a, p.pool, t);
    const double e_pi4 = expectation(p.hamiltonian, a);

    Eigen::VectorXd b = p.pool.excited_state(static_cast<std::size_t>(mu));
    apply_ansatz_inplace(b, p.pool, t);
    out.E_mu(mu) = expectation(p.hamiltonian, b);

    out.r(mu) = e_pi4 - 0.5 * out.E_mu(mu) - 0.5 * out.E;
    // Below the cancellation noise of the three energies the residue is zero.
    const double floor = 8 * std::numeric_limits<double>::epsilon() *
                         (std::abs(e_pi4) + 0.5 * std::abs(out.E_mu(mu)) + 0.5 * std::abs(out.E));
    if (std::abs(out.r(mu)) <= floor) out.r(mu) = 0.0;
  }
  ledger.charge(MeasurementSite::residue_sweep, 2 * p.size() + 1);
  return out;
}

Eigen::VectorXd residue_direct(const Problem& p, const Eigen::VectorXd& t) {
  check_length(p, t);
  Eigen::VectorXd psi = prepare_state(p.pool, t).amp;
  Eigen::VectorXd rotated = matvec(p.hamiltonian, psi);
  apply_ansatz_adjoint_inplace(rotated, p.pool, t);  // U+ H U |Phi0>
  Eigen::VectorXd r(static_cast<Eigen::Index>(p.size()));
  for (std::size_t mu = 0; mu < p.size(); ++mu) {
    const ExcitationOp& op = p.pool.ops[mu];
    r(static_cast<Eigen::Index>(mu)) =
        op.partner_sign * rotated(static_cast<Eigen::Index>(op.partner));
  }
  return r;
}

double variance_full(const Problem& p, const Eigen::VectorXd& t) {
  check_length(p, t);
  const Eigen::VectorXd psi = prepare_state(p.pool, t).amp;
  const Eigen::VectorXd hpsi = matvec(p.hamiltonian, psi);
  const double e = psi.dot(hpsi);
  return hpsi.squaredNorm() - e * e;
}

EnergyGradient energy_gradient(const Problem& p, const Eigen::VectorXd& t) {
  check_length(p, t);
  // psi = G_0 G_1 ... G_{N-1} |Phi0>. Walking k = 0..N-1 we keep
  // phi_k = G_k ... G_{N-1}|Phi0> and lambda_k = G_{k-1}^+ ... G_0^+ H psi,
  // so dE/dt_k = 2 <lambda_k| kappa_k |phi_k>.
  Eigen::VectorXd phi = prepare_state(p.pool, t).amp;
  Eigen::VectorXd lambda = matvec(p.hamiltonian, phi);
  EnergyGradient out;
  out.E = phi.dot(lambda);
  out.grad.resize(static_cast<Eigen::Index>(p.size()));
  for (std::size_t k = 0; k < p.size(); ++k) {
    const ExcitationOp& op = p.pool.ops[k];
    double g = 0.0;
    for (const Rotation& r : op.rotations)
      g += r.sign * (lambda(r.dst) * phi(r.src) - lambda(r.src) * phi(r.dst));
    out.grad(static_cast<Eigen::Index>(k)) = 2.0 * g;
    const double tk = t(static_cast<Eigen::Index>(k));
    apply_exp_kappa_inplace(phi, op, -tk);
    apply_exp_kappa_inplace(lambda, op, -tk);
  }
  return out;
}

}  // namespace pqe
