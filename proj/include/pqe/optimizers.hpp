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

#ifndef PQE_OPTIMIZERS_HPP
#define PQE_OPTIMIZERS_HPP

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pqe/residues.hpp"

namespace pqe {

enum class Method { standard, approx_mnr, approx_nr, hybrid, algorithm1, vqe_bfgs };

std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;

/// A quasi-Newton denominator fell below the guard; the step would be
/// meaningless.
class DegenerateDenominator : public std::runtime_error {
public:
  DegenerateDenominator(std::size_t mu, double value);
  std::size_t mu() const noexcept { return mu_; }

private:
  std::size_t mu_;
};

struct OptimizerConfig {
  Method method = Method::algorithm1;
  double epsilon = 1e-5;          // threshold on eps_T^A
  double eta_threshold = 1.0;     // Algorithm 1 switch
  double hybrid_threshold = 0.5;  // hybrid rule switch
  double tau_reset = 0.5;
  double armijo_c = 1e-4;
  double alpha_threshold = 1e-10;
  double denom_guard = 1e-6;
  int max_iters = 500;
  double linesearch_shrink = 0.5;
  int max_linesearch_probes = 40;
  double gradient_tolerance = 1e-5;  // vqe_bfgs stop on ||grad E||_2
  // DIIS extrapolation is not implemented; enabling it is rejected.
  bool diis = false;

  void validate() const;  // throws std::invalid_argument
};

enum class Rule { mp, diag, gradientlike, bfgs };
std::string_view to_string(Rule r) noexcept;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One optimizer iteration: the evaluation at t^(n) and the step taken from it.
/// `charged` is what this iteration added to the ledger.
struct IterationRecord {
  int iter = 0;
  double E = kNaN;
  double r_norm1 = kNaN;
  double r_norm2sq = kNaN;
  double eta = kNaN;
  double eps_TA = kNaN;
  bool eps_flagged = false;
  double alpha = kNaN;  // step length taken from this iterate (NaN if none)
  Rule rule = Rule::mp;
  double grad_norm = kNaN;  // vqe_bfgs only
  LedgerSnapshot charged;
  LedgerSnapshot ledger;  // cumulative after this iteration
  Eigen::VectorXd t;
};

struct OptimizerState {
  Eigen::VectorXd t;
  Eigen::VectorXd r;
  double E = kNaN;
  Eigen::VectorXd E_mu;
  double eta = kNaN;
  Eigen::MatrixXd H_inv;
  double alpha_last = kNaN;
  int iter = 0;
  double e0_initial = kNaN;
  Eigen::VectorXd frozen_denoms;  // E0(0) - E_mu(0), approx_mnr only
  std::vector<IterationRecord> trace;
};

enum class RunStatus { converged, not_converged, stalled, failed };
std::string_view to_string(RunStatus s) noexcept;

struct OptimizerResult {
  Eigen::VectorXd t;
  double E = kNaN;
  RunStatus status = RunStatus::not_converged;
  std::string message;
  std::vector<IterationRecord> trace;
  LedgerSnapshot measurements;
  double eps_TA = kNaN;
  double eta0 = kNaN;
  int iterations = 0;

  bool converged() const noexcept { return status == RunStatus::converged; }
};

/// eta = sum_mu |r_mu / (E_mu - E)|; +inf if a denominator vanishes.
double compute_eta(const Eigen::VectorXd& r, const Eigen::VectorXd& E_mu, double E);

/// Fresh residue sweep at state.t: fills r, E, E_mu, eta (2N+1 measurements).
/// The first call also fixes e0_initial.
void evaluate(const Problem& p, OptimizerState& state, MeasurementLedger& ledger);

OptimizerState initial_state(const Problem& p, const Eigen::VectorXd& t0);

// Update rules on an evaluated state. They return the next amplitudes.

/// t + r / Delta_mu (Moller-Plesset denominators).
Eigen::VectorXd update_standard(const Problem& p, const OptimizerState& s,
                                const OptimizerConfig& cfg);
/// t + r / frozen_denoms.
Eigen::VectorXd update_approx_mnr(const OptimizerState& s, const Eigen::VectorXd& frozen,
                                  const OptimizerConfig& cfg);
/// t - r / (E_mu - E).
Eigen::VectorXd update_approx_nr(const OptimizerState& s, const OptimizerConfig& cfg);

// One step = evaluate + update.
OptimizerState step_standard(const Problem& p, OptimizerState s, const OptimizerConfig& cfg,
                             MeasurementLedger& ledger);
OptimizerState step_approx_mnr(const Problem& p, OptimizerState s,
                               const Eigen::VectorXd& frozen_denoms,
                               const OptimizerConfig& cfg, MeasurementLedger& ledger);
OptimizerState step_approx_nr(const Problem& p, OptimizerState s, const OptimizerConfig& cfg,
                              MeasurementLedger& ledger);
/// MP rule while eta > hybrid_threshold, approximate NR otherwise.
OptimizerState step_hybrid(const Problem& p, OptimizerState s, const OptimizerConfig& cfg,
                           MeasurementLedger& ledger, Rule* rule_used = nullptr);

/// Runs standard / approx_mnr / approx_nr / hybrid to eps_T^A < epsilon.
OptimizerResult run_quasi_newton(const Problem& p, const OptimizerConfig& cfg,
                                 MeasurementLedger& ledger,
                                 std::optional<Eigen::VectorXd> t0 = std::nullopt);

/// Residue-driven line-search optimizer with BFGS inverse-Jacobian updates.
OptimizerResult run_algorithm1(const Problem& p, const OptimizerConfig& cfg,
                               MeasurementLedger& ledger,
                               std::optional<Eigen::VectorXd> t0 = std::nullopt);

/// Energy minimization with BFGS and exact gradients. Each gradient is charged
/// 2N+1 measurements, the parameter-shift cost.
OptimizerResult run_vqe_bfgs(const Problem& p, const OptimizerConfig& cfg,
                             MeasurementLedger& ledger,
                             std::optional<Eigen::VectorXd> t0 = std::nullopt);

/// Dispatches on cfg.method.
OptimizerResult optimize(const Problem& p, const OptimizerConfig& cfg,
                         MeasurementLedger& ledger,
                         std::optional<Eigen::VectorXd> t0 = std::nullopt);

/// BFGS update of an inverse Jacobian/Hessian guess. Returns false (and leaves
/// H untouched) when s^T y <= 0.
bool bfgs_inverse_update(Eigen::MatrixXd& H, const Eigen::VectorXd& s,
                         const Eigen::VectorXd& y);

/// Central finite-difference Jacobian of residue_direct. Oracle only.
Eigen::MatrixXd jacobian_fd(const Problem& p, const Eigen::VectorXd& t, double step);

/// Diagonal model J(t) ~ diag(E_mu(t) - E(t)).
Eigen::VectorXd jacobian_diag_approx(const ResidueEvaluation& ev);

/// gamma from a least-squares fit of log ||t^(n) - t_final||_1 against n,
/// using iterates whose distance exceeds `floor`. Needs three points.
std::optional<double> fit_convergence_rate(const std::vector<IterationRecord>& trace,
                                           const Eigen::VectorXd& t_final,
                                           double floor = 1e-8);

}  // namespace pqe

#endif  // PQE_OPTIMIZERS_HPP
