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

#include "pqe/ansatz.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace pqe {

std::string ExcitationOp::label() const {
  return fmt::format("{}->{}", fmt::join(occupied, ","), fmt::join(virt, ","));
}

Eigen::VectorXd OperatorPool::excited_state(std::size_t mu) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis->size()));
  v(static_cast<Eigen::Index>(ops.at(mu).partner)) = ops[mu].partner_sign;
  return v;
}

ExcitationOp make_excitation(const SectorBasis& basis, std::size_t reference,
                             std::vector<int> occupied, std::vector<int> virt,
                             const Eigen::VectorXd& orbital_energies) {
  if (occupied.size() != virt.size() || occupied.empty())
    throw std::invalid_argument("excitation needs equal, nonzero occupied/virtual counts");
  ExcitationOp op;
  op.rank = static_cast<int>(occupied.size());
  for (int i : occupied) op.delta_mp += orbital_energies(i);
  for (int a : virt) op.delta_mp -= orbital_energies(a);

  for (std::size_t src = 0; src < basis.size(); ++src) {
    auto ex = apply_excitation(basis[src], virt, occupied);
    if (!ex) continue;
    auto dst = basis.find(ex->det);
    if (!dst) continue;
    op.rotations.push_back(Rotation{static_cast<std::uint32_t>(src),
                                    static_cast<std::uint32_t>(*dst),
                                    static_cast<double>(ex->sign)});
    if (src == reference) {
      op.partner = *dst;
      op.partner_sign = ex->sign;
    }
  }
  auto on_ref = apply_excitation(basis[reference], virt, occupied);
  if (!on_ref || !basis.find(on_ref->det))
    throw std::invalid_argument("excitation vanishes on the reference or leaves the sector");
  op.occupied = std::move(occupied);
  op.virt = std::move(virt);
  return op;
}

namespace {

// All k-subsets of `from`, lexicographic.
std::vector<std::vector<int>> combinations(const std::vector<int>& from, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < from.size(); ++i) {
      cur.push_back(from[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

int alpha_count(const std::vector<int>& orbs) {
  int n = 0;
  for (int p : orbs) n += (p % 2 == 0);
  return n;
}

}  // namespace

OperatorPool generate_pool(const SpinOrbitalIntegrals& ints, BasisPtr basis,
                           int max_rank) {
  if (max_rank < 1 || max_rank > 4)
    throw std::invalid_argument(fmt::format("max_rank must be in 1..4, got {}", max_rank));
  if (basis->m() != ints.m || basis->n_electrons() != ints.n_electrons)
    throw DimensionError("basis does not match the integrals");

  OperatorPool pool;
  pool.basis = basis;
  const Determinant ref = reference_determinant(ints.n_electrons);
  pool.reference = basis->index(ref);

  std::vector<int> occ, vir;
  for (int p = 0; p < ints.m; ++p) (ref.occupied(p) ? occ : vir).push_back(p);

  for (int rank = 1; rank <= max_rank; ++rank) {
    const auto occ_sets = combinations(occ, rank);
    const auto vir_sets = combinations(vir, rank);
    for (const auto& o : occ_sets)
      for (const auto& v : vir_sets) {
        if (alpha_count(o) != alpha_count(v)) continue;
        pool.ops.push_back(make_excitation(*basis, pool.reference, o, v,
                                           ints.orbital_energies));
      }
  }
  return pool;
}

Eigen::VectorXd apply_kappa(const Eigen::VectorXd& psi, const ExcitationOp& op) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(psi.size());
  for (const Rotation& r : op.rotations) {
    out(r.dst) += r.sign * psi(r.src);
    out(r.src) -= r.sign * psi(r.dst);
  }
  return out;
}

void apply_exp_kappa_inplace(Eigen::VectorXd& psi, const ExcitationOp& op, double t) {
  if (t == 0.0) return;
  const double c = std::cos(t), s = std::sin(t);
  for (const Rotation& r : op.rotations) {
    const double x = psi(r.src), y = psi(r.dst);
    psi(r.src) = c * x - r.sign * s * y;
    psi(r.dst) = r.sign * s * x + c * y;
  }
}

StateVector apply_exp_kappa(const StateVector& psi, const ExcitationOp& op, double t) {
  StateVector out = psi;
  apply_exp_kappa_inplace(out.amp, op, t);
  return out;
}

void apply_ansatz_inplace(Eigen::VectorXd& psi, const OperatorPool& pool,
                          const Eigen::VectorXd& t) {
  if (static_cast<std::size_t>(t.size()) != pool.size())
    throw DimensionError(fmt::format("{} amplitudes for a pool of {}", t.size(), pool.size()));
  for (std::size_t k = pool.size(); k-- > 0;)
    apply_exp_kappa_inplace(psi, pool.ops[k], t(static_cast<Eigen::Index>(k)));
}

void apply_ansatz_adjoint_inplace(Eigen::VectorXd& psi, const OperatorPool& pool,
                                  const Eigen::VectorXd& t) {
  if (static_cast<std::size_t>(t.size()) != pool.size())
    throw DimensionError(fmt::format("{} amplitudes for a pool of {}", t.size(), pool.size()));
  for (std::size_t k = 0; k < pool.size(); ++k)
    apply_exp_kappa_inplace(psi, pool.ops[k], -t(static_cast<Eigen::Index>(k)));
}

StateVector prepare_state(const OperatorPool& pool, const Eigen::VectorXd& t) {
  StateVector psi = pool.reference_state();
  apply_ansatz_inplace(psi.amp, pool, t);
  return psi;
}

}  // namespace pqe
