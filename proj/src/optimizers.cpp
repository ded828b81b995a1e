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

#include "pqe/optimizers.hpp"

#include <fmt/format.h>

#include <cmath>

#include "pqe/bounds.hpp"

namespace pqe {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::standard: return "standard";
    case Method::approx_mnr: return "approx_mnr";
    case Method::approx_nr: return "approx_nr";
    case Method::hybrid: return "hybrid";
    case Method::algorithm1: return "algorithm1";
    case Method::vqe_bfgs: return "vqe_bfgs";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
  for (Method m : {Method::standard, Method::approx_mnr, Method::approx_nr,
                   Method::hybrid, Method::algorithm1, Method::vqe_bfgs})
    if (to_string(m) == name) return m;
  return std::nullopt;
}

std::string_view to_string(Rule r) noexcept {
  switch (r) {
    case Rule::mp: return "mp";
    case Rule::diag: return "diag";
    case Rule::gradientlike: return "gradientlike";
    case Rule::bfgs: return "bfgs";
  }
  return "?";
}

std::string_view to_string(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::converged: return "converged";
    case RunStatus::not_converged: return "not_converged";
    case RunStatus::stalled: return "stalled";
    case RunStatus::failed: return "failed";
  }
  return "?";
}

DegenerateDenominator::DegenerateDenominator(std::size_t mu, double value)
    : std::runtime_error(fmt::format(
          "degenerate denominator {:.3e} for excitation {}", value, mu)),
      mu_(mu) {}

void OptimizerConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(epsilon > 0, "epsilon must be positive");
  require(eta_threshold > 0, "eta_threshold must be positive");
  require(hybrid_threshold > 0, "hybrid_threshold must be positive");
  require(tau_reset > 0, "tau_reset must be positive");
  require(armijo_c > 0 && armijo_c < 1, "armijo_c must lie in (0, 1)");
  require(alpha_threshold > 0, "alpha_threshold must be positive");
  require(denom_guard > 0, "denom_guard must be positive");
  require(max_iters >= 0, "max_iters must be non-negative");
  require(linesearch_shrink > 0 && linesearch_shrink < 1,
          "linesearch_shrink must lie in (0, 1)");
  require(max_linesearch_probes > 0, "max_linesearch_probes must be positive");
  require(gradient_tolerance > 0, "gradient_tolerance must be positive");
  require(!diis, "DIIS extrapolation is not supported");
}

double compute_eta(const Eigen::VectorXd& r, const Eigen::VectorXd& E_mu, double E) {
  double eta = 0.0;
  for (Eigen::Index mu = 0; mu < r.size(); ++mu) {
    if (r(mu) == 0.0) continue;
    const double d = E_mu(mu) - E;
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    eta += std::abs(r(mu) / d);
  }
  return eta;
}

OptimizerState initial_state(const Problem& p, const Eigen::VectorXd& t0) {
  if (static_cast<std::size_t>(t0.size()) != p.size())
    throw DimensionError(
        fmt::format("{} starting amplitudes for a pool of {}", t0.size(), p.size()));
  OptimizerState s;
  s.t = t0;
  return s;
}

void evaluate(const Problem& p, OptimizerState& state, MeasurementLedger& ledger) {
  ResidueEvaluation ev = residue_sweep(p, state.t, ledger);
  state.r = std::move(ev.r);
  state.E = ev.E;
  state.E_mu = std::move(ev.E_mu);
  state.eta = compute_eta(state.r, state.E_mu, state.E);
  if (std::isnan(state.e0_initial)) state.e0_initial = state.E;
}

namespace {

void guard(double d, std::size_t mu, const OptimizerConfig& cfg) {
  if (!(std::abs(d) >= cfg.denom_guard)) throw DegenerateDenominator(mu, d);
}

bool finite(const Eigen::VectorXd& v) { return v.allFinite(); }

IterationRecord make_record(int iter, const OptimizerState& s) {
  IterationRecord rec;
  rec.iter = iter;
  rec.E = s.E;
  rec.r_norm1 = s.r.lpNorm<1>();
  rec.r_norm2sq = s.r.squaredNorm();
  rec.eta = s.eta;
  const auto crit = practical_criterion(rec.r_norm2sq, s.e0_initial, s.E);
  rec.eps_TA = crit.value;
  rec.eps_flagged = crit.flagged;
  rec.t = s.t;
  return rec;
}

bool criterion_met(const IterationRecord& rec, double epsilon) {
  if (rec.r_norm2sq == 0.0) return true;
  return !rec.eps_flagged && rec.eps_TA < epsilon;
}

void close_record(IterationRecord& rec, const LedgerSnapshot& before,
                  const MeasurementLedger& ledger) {
  rec.ledger = ledger.snapshot();
  rec.charged = rec.ledger - before;
}

OptimizerResult finish(OptimizerState& s, RunStatus status, std::string message,
                       const MeasurementLedger& ledger, double eta0) {
  OptimizerResult out;
  out.t = s.t;
  out.E = s.E;
  out.status = status;
  out.message = std::move(message);
  out.measurements = ledger.snapshot();
  out.eta0 = eta0;
  out.iterations = s.trace.empty() ? 0 : s.trace.back().iter;
  out.eps_TA = s.trace.empty() ? kNaN : s.trace.back().eps_TA;
  out.trace = std::move(s.trace);
  return out;
}

Eigen::VectorXd start_point(const Problem& p, const std::optional<Eigen::VectorXd>& t0) {
  return t0 ? *t0 : Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.size()));
}

}  // namespace

Eigen::VectorXd update_standard(const Problem& p, const OptimizerState& s,
                                const OptimizerConfig& cfg) {
  Eigen::VectorXd t = s.t;
  for (Eigen::Index mu = 0; mu < t.size(); ++mu) {
    const double d = p.pool.ops[static_cast<std::size_t>(mu)].delta_mp;
    guard(d, static_cast<std::size_t>(mu), cfg);
    t(mu) += s.r(mu) / d;
  }
  return t;
}

Eigen::VectorXd update_approx_mnr(const OptimizerState& s, const Eigen::VectorXd& frozen,
                                  const OptimizerConfig& cfg) {
  Eigen::VectorXd t = s.t;
  for (Eigen::Index mu = 0; mu < t.size(); ++mu) {
    guard(frozen(mu), static_cast<std::size_t>(mu), cfg);
    t(mu) += s.r(mu) / frozen(mu);
  }
  return t;
}

Eigen::VectorXd update_approx_nr(const OptimizerState& s, const OptimizerConfig& cfg) {
  Eigen::VectorXd t = s.t;
  for (Eigen::Index mu = 0; mu < t.size(); ++mu) {
    const double d = s.E_mu(mu) - s.E;
    guard(d, static_cast<std::size_t>(mu), cfg);
    t(mu) -= s.r(mu) / d;
  }
  return t;
}

OptimizerState step_standard(const Problem& p, OptimizerState s, const OptimizerConfig& cfg,
                             MeasurementLedger& ledger) {
  evaluate(p, s, ledger);
  s.t = update_standard(p, s, cfg);
  ++s.iter;
  return s;
}

OptimizerState step_approx_mnr(const Problem& p, OptimizerState s,
                               const Eigen::VectorXd& frozen_denoms,
                               const OptimizerConfig& cfg, MeasurementLedger& ledger) {
  evaluate(p, s, ledger);
  s.t = update_approx_mnr(s, frozen_denoms, cfg);
  ++s.iter;
  return s;
}

OptimizerState step_approx_nr(const Problem& p, OptimizerState s, const OptimizerConfig& cfg,
                              MeasurementLedger& ledger) {
  evaluate(p, s, ledger);
  s.t = update_approx_nr(s, cfg);
  ++s.iter;
  return s;
}

OptimizerState step_hybrid(const Problem& p, OptimizerState s, const OptimizerConfig& cfg,
                           MeasurementLedger& ledger, Rule* rule_used) {
  evaluate(p, s, ledger);
  const bool mp = s.eta > cfg.hybrid_threshold;
  s.t = mp ? update_standard(p, s, cfg) : update_approx_nr(s, cfg);
  if (rule_used) *rule_used = mp ? Rule::mp : Rule::diag;
  ++s.iter;
  return s;
}

OptimizerResult run_quasi_newton(const Problem& p, const OptimizerConfig& cfg,
                                 MeasurementLedger& ledger,
                                 std::optional<Eigen::VectorXd> t0) {
  cfg.validate();
  OptimizerState s = initial_state(p, start_point(p, t0));
  double eta0 = kNaN;

  for (int iter = 0;; ++iter) {
    const LedgerSnapshot before = ledger.snapshot();
    evaluate(p, s, ledger);
    IterationRecord rec = make_record(iter, s);
    if (iter == 0) {
      eta0 = s.eta;
      s.frozen_denoms = s.E - s.E_mu.array();
    }
    auto stop = [&](RunStatus st, std::string msg) {
      close_record(rec, before, ledger);
      s.trace.push_back(std::move(rec));
      return finish(s, st, std::move(msg), ledger, eta0);
    };

    if (!finite(s.r) || !std::isfinite(s.E))
      return stop(RunStatus::not_converged, "residues became non-finite");
    if (criterion_met(rec, cfg.epsilon)) return stop(RunStatus::converged, {});
    if (iter >= cfg.max_iters)
      return stop(RunStatus::not_converged,
                  fmt::format("no convergence after {} iterations", cfg.max_iters));

    Eigen::VectorXd next;
    try {
      switch (cfg.method) {
        case Method::standard:
          next = update_standard(p, s, cfg);
          rec.rule = Rule::mp;
          break;
        case Method::approx_mnr:
          next = update_approx_mnr(s, s.frozen_denoms, cfg);
          rec.rule = Rule::diag;
          break;
        case Method::approx_nr:
          next = update_approx_nr(s, cfg);
          rec.rule = Rule::diag;
          break;
        case Method::hybrid:
          if (s.eta > cfg.hybrid_threshold) {
            next = update_standard(p, s, cfg);
            rec.rule = Rule::mp;
          } else {
            next = update_approx_nr(s, cfg);
            rec.rule = Rule::diag;
          }
          break;
        default:
          throw std::invalid_argument(
              fmt::format("{} is not a quasi-Newton update rule", to_string(cfg.method)));
      }
    } catch (const DegenerateDenominator& e) {
      return stop(RunStatus::failed, e.what());
    }
    rec.alpha = 1.0;
    close_record(rec, before, ledger);
    s.trace.push_back(std::move(rec));
    s.t = std::move(next);
    s.alpha_last = 1.0;
    s.iter = iter + 1;
  }
}

namespace {

// diag(1/(E_mu - E)); nullopt when a denominator is below the guard.
std::optional<Eigen::MatrixXd> diagonal_inverse_jacobian(const OptimizerState& s,
                                                         const OptimizerConfig& cfg) {
  const Eigen::VectorXd d = s.E_mu.array() - s.E;
  if ((d.array().abs() < cfg.denom_guard).any()) return std::nullopt;
  return Eigen::MatrixXd(d.cwiseInverse().asDiagonal());
}

Eigen::MatrixXd gradient_like(Eigen::Index n) {
  return 2.0 * Eigen::MatrixXd::Identity(n, n);
}

}  // namespace

bool bfgs_inverse_update(Eigen::MatrixXd& H, const Eigen::VectorXd& s,
                         const Eigen::VectorXd& y) {
  const double sy = s.dot(y);
  if (!(sy > 0)) return false;
  const Eigen::VectorXd Hy = H * y;
  const double yHy = y.dot(Hy);
  H += ((sy + yHy) / (sy * sy)) * (s * s.transpose()) -
       (Hy * s.transpose() + s * Hy.transpose()) / sy;
  return true;
}

OptimizerResult run_algorithm1(const Problem& p, const OptimizerConfig& cfg,
                               MeasurementLedger& ledger,
                               std::optional<Eigen::VectorXd> t0) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(p.size());
  OptimizerState s = initial_state(p, start_point(p, t0));
  double eta0 = kNaN;
  Rule kind = Rule::gradientlike;
  Eigen::VectorXd last_step, prev_r;
  double prev_eta = kNaN;

  auto reset = [&](bool allow_diag) {
    if (allow_diag && s.eta < cfg.eta_threshold) {
      if (auto d = diagonal_inverse_jacobian(s, cfg)) {
        s.H_inv = std::move(*d);
        kind = Rule::diag;
        return;
      }
    }
    s.H_inv = gradient_like(n);
    kind = Rule::gradientlike;
  };

  for (int iter = 0;; ++iter) {
    const LedgerSnapshot before = ledger.snapshot();
    evaluate(p, s, ledger);

    if (iter == 0) {
      eta0 = s.eta;
      reset(true);
    } else if (s.eta < cfg.eta_threshold && prev_eta > cfg.eta_threshold) {
      reset(true);
    } else if (last_step.lpNorm<1>() > cfg.tau_reset) {
      reset(true);
    } else if (bfgs_inverse_update(s.H_inv, last_step, s.r - prev_r)) {
      kind = Rule::bfgs;
    }

    IterationRecord rec = make_record(iter, s);
    auto stop = [&](RunStatus st, std::string msg) {
      close_record(rec, before, ledger);
      s.trace.push_back(std::move(rec));
      return finish(s, st, std::move(msg), ledger, eta0);
    };

    if (!finite(s.r) || !std::isfinite(s.E))
      return stop(RunStatus::not_converged, "residues became non-finite");
    if (criterion_met(rec, cfg.epsilon)) return stop(RunStatus::converged, {});
    if (iter >= cfg.max_iters)
      return stop(RunStatus::not_converged,
                  fmt::format("no convergence after {} iterations", cfg.max_iters));

    Eigen::VectorXd dir = s.H_inv * s.r;
    double descent = dir.dot(s.r);
    if (!(descent > 0)) {
      // H_inv r is not a descent measure; fall back to the residue direction.
      s.H_inv = gradient_like(n);
      kind = Rule::gradientlike;
      dir = 2.0 * s.r;
      descent = dir.dot(s.r);
    }
    rec.rule = kind;

    double alpha = 1.0;
    bool accepted = false;
    for (int probe = 0; probe < cfg.max_linesearch_probes; ++probe) {
      const double e_try = energy(p, s.t - alpha * dir, ledger, MeasurementSite::line_search);
      if (e_try < s.E - cfg.armijo_c * alpha * descent) {
        accepted = true;
        break;
      }
      alpha *= cfg.linesearch_shrink;
      if (alpha < cfg.alpha_threshold) break;
    }
    rec.alpha = alpha;
    if (!accepted)
      return stop(RunStatus::stalled,
                  fmt::format("line search stalled at alpha={:.3e}", alpha));

    last_step = -alpha * dir;
    prev_r = s.r;
    prev_eta = s.eta;
    close_record(rec, before, ledger);
    s.trace.push_back(std::move(rec));
    s.t += last_step;
    s.alpha_last = alpha;
    s.iter = iter + 1;
  }
}

OptimizerResult run_vqe_bfgs(const Problem& p, const OptimizerConfig& cfg,
                             MeasurementLedger& ledger, std::optional<Eigen::VectorXd> t0) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(p.size());
  OptimizerState s = initial_state(p, start_point(p, t0));
  Eigen::MatrixXd H = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd last_step, prev_g;
  const std::uint64_t gradient_cost = 2 * p.size() + 1;

  for (int iter = 0;; ++iter) {
    const LedgerSnapshot before = ledger.snapshot();
    EnergyGradient eg = energy_gradient(p, s.t);
    ledger.charge(MeasurementSite::gradient, gradient_cost);
    s.E = eg.E;
    if (iter > 0) bfgs_inverse_update(H, last_step, eg.grad - prev_g);

    IterationRecord rec;
    rec.iter = iter;
    rec.E = eg.E;
    rec.grad_norm = eg.grad.norm();
    rec.rule = Rule::bfgs;
    rec.t = s.t;
    auto stop = [&](RunStatus st, std::string msg) {
      close_record(rec, before, ledger);
      s.trace.push_back(std::move(rec));
      return finish(s, st, std::move(msg), ledger, kNaN);
    };

    if (!eg.grad.allFinite() || !std::isfinite(eg.E))
      return stop(RunStatus::not_converged, "gradient became non-finite");
    if (rec.grad_norm < cfg.gradient_tolerance) return stop(RunStatus::converged, {});
    if (iter >= cfg.max_iters)
      return stop(RunStatus::not_converged,
                  fmt::format("no convergence after {} iterations", cfg.max_iters));

    Eigen::VectorXd dir = -(H * eg.grad);
    double slope = eg.grad.dot(dir);
    if (!(slope < 0)) {
      H.setIdentity();
      dir = -eg.grad;
      slope = eg.grad.dot(dir);
    }

    double alpha = 1.0;
    bool accepted = false;
    for (int probe = 0; probe < cfg.max_linesearch_probes; ++probe) {
      const double e_try = energy(p, s.t + alpha * dir, ledger, MeasurementSite::line_search);
      if (e_try <= eg.E + cfg.armijo_c * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= cfg.linesearch_shrink;
      if (alpha < cfg.alpha_threshold) break;
    }
    rec.alpha = alpha;
    if (!accepted)
      return stop(RunStatus::stalled,
                  fmt::format("line search stalled at alpha={:.3e}", alpha));

    last_step = alpha * dir;
    prev_g = eg.grad;
    close_record(rec, before, ledger);
    s.trace.push_back(std::move(rec));
    s.t += last_step;
    s.alpha_last = alpha;
    s.iter = iter + 1;
  }
}

OptimizerResult optimize(const Problem& p, const OptimizerConfig& cfg,
                         MeasurementLedger& ledger, std::optional<Eigen::VectorXd> t0) {
  switch (cfg.method) {
    case Method::algorithm1: return run_algorithm1(p, cfg, ledger, std::move(t0));
    case Method::vqe_bfgs: return run_vqe_bfgs(p, cfg, ledger, std::move(t0));
    default: return run_quasi_newton(p, cfg, ledger, std::move(t0));
  }
}

Eigen::MatrixXd jacobian_fd(const Problem& p, const Eigen::VectorXd& t, double step) {
  if (!(step > 0)) throw std::invalid_argument("finite-difference step must be positive");
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXd J(n, n);
  for (Eigen::Index nu = 0; nu < n; ++nu) {
    Eigen::VectorXd tp = t, tm = t;
    tp(nu) += step;
    tm(nu) -= step;
    J.col(nu) = (residue_direct(p, tp) - residue_direct(p, tm)) / (2 * step);
  }
  return J;
}

Eigen::VectorXd jacobian_diag_approx(const ResidueEvaluation& ev) {
  return ev.E_mu.array() - ev.E;
}

std::optional<double> fit_convergence_rate(const std::vector<IterationRecord>& trace,
                                           const Eigen::VectorXd& t_final, double floor) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k + 1 < trace.size(); ++k) {
    const double d = (trace[k].t - t_final).lpNorm<1>();
    if (d > floor) {
      xs.push_back(trace[k].iter);
      ys.push_back(std::log(d));
    }
  }
  if (xs.size() < 3) return std::nullopt;
  const auto m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return -slope;
}

}  // namespace pqe
