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

// Eigenvalue error certificates and Newton-Kantorovich rate estimates.
//
// All functions are pure scalar formulas. A violated precondition yields an
// empty optional ("inapplicable") rather than an exception, so sweeps over
// stretched geometries keep going when E(t) >= E_es.

#ifndef PQE_BOUNDS_HPP
#define PQE_BOUNDS_HPP

#include <Eigen/Dense>

#include <cmath>
#include <concepts>
#include <limits>
#include <optional>

namespace pqe {

template <std::floating_point Scalar>
struct Bracket {
  Scalar lower;
  Scalar upper;
};

/// Temple: E - R^2/(E_es - E) <= E_gs <= E. Requires E < E_es.
template <std::floating_point Scalar>
std::optional<Bracket<Scalar>> temple_bracket(Scalar E, Scalar r2_sum, Scalar e_es) {
  if (!(E < e_es)) return std::nullopt;
  return Bracket<Scalar>{E - r2_sum / (e_es - E), E};
}

/// Kato: given exactly one eigenvalue in ]alpha, beta[ and
/// R^2 < (beta - E)(E - alpha), the eigenvalue lies in
/// [E - R^2/(beta - E), E + R^2/(E - alpha)]. alpha may be -inf.
template <std::floating_point Scalar>
std::optional<Bracket<Scalar>> kato_bracket(Scalar E, Scalar r2_sum, Scalar alpha,
                                            Scalar beta) {
  if (!(alpha < E && E < beta)) return std::nullopt;
  if (std::isinf(alpha)) return Bracket<Scalar>{E - r2_sum / (beta - E), E};
  if (!(r2_sum < (beta - E) * (E - alpha))) return std::nullopt;
  return Bracket<Scalar>{E - r2_sum / (beta - E), E + r2_sum / (E - alpha)};
}

/// Squared-overlap lower bound with the ground state,
/// 1 - R^2/(E_es - E_gs)^2 * (1 + R^2/(E_es - E)^2). May be negative.
template <std::floating_point Scalar>
std::optional<Scalar> overlap_lower_bound(Scalar r2_sum, Scalar E, Scalar e_gs,
                                          Scalar e_es) {
  const Scalar gap = e_es - e_gs;
  if (!(gap > 0) || !(E < e_es)) return std::nullopt;
  const Scalar d = e_es - E;
  return Scalar(1) - r2_sum / (gap * gap) * (Scalar(1) + r2_sum / (d * d));
}

/// Exact-gap error bound eps_T = R^2 / (E_es - E).
template <std::floating_point Scalar>
std::optional<Scalar> temple_error(Scalar E, Scalar r2_sum, Scalar e_es) {
  if (!(E < e_es)) return std::nullopt;
  return r2_sum / (e_es - E);
}

template <std::floating_point Scalar>
struct PracticalCriterion {
  Scalar value;
  bool flagged;  // denominator non-positive: energy has not descended
};

/// Stopping quantity sum_{mu in A} r_mu^2 / (E0_initial - E). A zero residue
/// vector gives 0 whatever the denominator.
template <std::floating_point Scalar>
PracticalCriterion<Scalar> practical_criterion(Scalar r2_pool, Scalar e0_initial,
                                               Scalar e_current) {
  if (r2_pool == Scalar(0)) return {Scalar(0), !(e0_initial > e_current)};
  const Scalar denom = e0_initial - e_current;
  if (denom == Scalar(0)) return {std::numeric_limits<Scalar>::infinity(), true};
  return {r2_pool / denom, !(denom > 0)};
}

template <typename Derived>
auto practical_criterion(const Eigen::MatrixBase<Derived>& r_pool,
                         typename Derived::Scalar e0_initial,
                         typename Derived::Scalar e_current) {
  return practical_criterion(r_pool.squaredNorm(), e0_initial, e_current);
}

/// eps_1 = sum |r_mu|, the residual 1-norm bound reported for comparison.
template <typename Derived>
typename Derived::Scalar residual_one_norm(const Eigen::MatrixBase<Derived>& r) {
  return r.template lpNorm<1>();
}

template <std::floating_point Scalar>
struct KantorovichRate {
  Scalar q;
  Scalar gamma_lb;
};

/// q = 1 - sqrt(1 - 2 eta L), gamma_lb = -log q, predicted when 2 eta L < 1.
template <std::floating_point Scalar>
std::optional<KantorovichRate<Scalar>> nk_rate(Scalar eta, Scalar L = Scalar(1)) {
  if (!(eta >= 0) || !(2 * eta * L < 1)) return std::nullopt;
  const Scalar q = Scalar(1) - std::sqrt(Scalar(1) - 2 * eta * L);
  return KantorovichRate<Scalar>{q, -std::log(q)};
}

/// q <= 1 - sqrt(1 - 2 ||r(t0)||_1 / gap), valid when 2 ||r||_1 < gap.
template <std::floating_point Scalar>
std::optional<Scalar> homo_lumo_rate_bound(Scalar r0_norm1, Scalar gap) {
  if (!(gap > 0) || !(2 * r0_norm1 < gap)) return std::nullopt;
  return Scalar(1) - std::sqrt(Scalar(1) - 2 * r0_norm1 / gap);
}

enum class CertificateKind { exact_temple, practical_A, kato_bracket };

/// One evaluated certificate. `eps_t` is NaN when inapplicable.
struct EnergyCertificate {
  double e_trial = 0.0;
  double r2_sum = 0.0;
  double denom = 0.0;
  double eps_t = std::numeric_limits<double>::quiet_NaN();
  CertificateKind kind = CertificateKind::exact_temple;

  bool applicable() const { return !std::isnan(eps_t); }
};

inline EnergyCertificate exact_temple_certificate(double E, double r2_full, double e_es) {
  EnergyCertificate c{E, r2_full, e_es - E, std::numeric_limits<double>::quiet_NaN(),
                      CertificateKind::exact_temple};
  if (auto eps = temple_error(E, r2_full, e_es)) c.eps_t = *eps;
  return c;
}

inline EnergyCertificate practical_certificate(double E, double r2_pool, double e0) {
  const auto crit = practical_criterion(r2_pool, e0, E);
  EnergyCertificate c{E, r2_pool, e0 - E, std::numeric_limits<double>::quiet_NaN(),
                      CertificateKind::practical_A};
  if (!crit.flagged) c.eps_t = crit.value;
  return c;
}

}  // namespace pqe

#endif  // PQE_BOUNDS_HPP
