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

#include "pqe/experiment.hpp"

#include <fmt/format.h>
#include <glob.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

#include "pqe/bounds.hpp"
#include "pqe/exactdiag.hpp"
#include "pqe/integrals.hpp"

namespace pqe {

namespace fs = std::filesystem;

int exit_code_for(RunStatus s) noexcept {
  switch (s) {
    case RunStatus::converged: return exit_code::converged;
    case RunStatus::stalled: return exit_code::stalled;
    default: return exit_code::not_converged;
  }
}

void RunConfig::validate() const {
  if (methods.empty()) throw std::invalid_argument("no method given");
  if (max_rank < 1 || max_rank > 4)
    throw std::invalid_argument(fmt::format("max rank {} outside 1..4", max_rank));
  if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
  optimizer.validate();
}

namespace {

std::string num(double x) {
  if (std::isnan(x)) return {};
  return fmt::format("{:.12e}", x);
}

struct Loaded {
  Fixture fixture;
  Problem problem;
  std::optional<SpectralOracle> oracle;
};

Loaded load(const fs::path& path, const RunConfig& cfg) {
  Fixture fx = load_fixture(path);
  Problem p = make_problem(fx.ints, cfg.max_rank);
  std::optional<SpectralOracle> oracle;
  if (cfg.oracle) {
    LanczosOptions opts;
    opts.seed = cfg.seed;
    oracle = solve(p.hamiltonian, 3, opts);
  }
  return {std::move(fx), std::move(p), std::move(oracle)};
}

RunOutcome evaluate_method(const Loaded& L, Method method, const RunConfig& cfg) {
  RunOutcome out;
  out.fixture = L.fixture.path;
  out.method = method;
  if (L.fixture.meta) {
    out.distance = L.fixture.meta->bond_distance_angstrom.value_or(kNaN);
    out.fci_sidecar = L.fixture.meta->fci_ground_energy.value_or(kNaN);
  }
  out.pool_size = L.problem.size();
  out.sector_dim = L.problem.hamiltonian.basis->size();

  OptimizerConfig oc = cfg.optimizer;
  oc.method = method;
  MeasurementLedger ledger;
  out.result = optimize(L.problem, oc, ledger);

  if (auto g = fit_convergence_rate(out.result.trace, out.result.t)) out.gamma_fit = *g;
  if (!std::isnan(out.result.eta0))
    if (auto nk = nk_rate(out.result.eta0)) out.gamma_lb = nk->gamma_lb;

  if (L.oracle) {
    out.e_gs = L.oracle->e_gs;
    out.e_es = L.oracle->e_es;
    out.eps_exact = out.result.E - out.e_gs;
    if (out.result.t.allFinite()) {
      const double var = variance_full(L.problem, out.result.t);
      if (auto e = temple_error(out.result.E, var, out.e_es)) out.eps_T_full = *e;
    }
  }
  return out;
}

std::vector<RunOutcome> run_fixture(const fs::path& path, const RunConfig& cfg) {
  std::vector<RunOutcome> outs;
  try {
    const Loaded L = load(path, cfg);
    for (Method m : cfg.methods) {
      try {
        outs.push_back(evaluate_method(L, m, cfg));
      } catch (const std::exception& e) {
        RunOutcome o;
        o.fixture = path;
        o.method = m;
        o.result.status = RunStatus::failed;
        o.error = e.what();
        outs.push_back(std::move(o));
      }
    }
  } catch (const std::exception& e) {
    for (Method m : cfg.methods) {
      RunOutcome o;
      o.fixture = path;
      o.method = m;
      o.result.status = RunStatus::failed;
      o.error = e.what();
      outs.push_back(std::move(o));
    }
  }
  return outs;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c == '\n' ? ' ' : c;
  }
  return q + '"';
}

}  // namespace

RunOutcome run_point(const fs::path& fcidump, Method method, const RunConfig& cfg,
                     bool capture_errors) {
  if (!capture_errors) return evaluate_method(load(fcidump, cfg), method, cfg);
  RunConfig one = cfg;
  one.methods = {method};
  return run_fixture(fcidump, one).front();
}

void write_atomic(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
    f << contents;
    f.flush();
    if (!f) throw std::runtime_error(fmt::format("write failed for {}", tmp.string()));
  }
  fs::rename(tmp, path);
}

std::string trace_csv(const OptimizerResult& result) {
  std::string s =
      "iter,E,r_norm1,r_norm2sq,eta,eps_TA,eps_flagged,alpha,rule,grad_norm,"
      "charged_residue_sweep,charged_line_search,charged_energy,charged_gradient,"
      "charged_total,cumulative_total\n";
  for (const IterationRecord& r : result.trace) {
    s += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.iter, num(r.E),
                     num(r.r_norm1), num(r.r_norm2sq), num(r.eta), num(r.eps_TA),
                     r.eps_flagged ? 1 : 0, num(r.alpha), to_string(r.rule),
                     num(r.grad_norm), r.charged.residue_sweep, r.charged.line_search,
                     r.charged.energy, r.charged.gradient, r.charged.total(),
                     r.ledger.total());
  }
  return s;
}

std::string summary_text(const RunOutcome& o) {
  std::string s;
  auto kv = [&s](std::string_view k, const std::string& v) {
    s += fmt::format("{} = {}\n", k, v);
  };
  kv("fixture", o.fixture.string());
  kv("method", std::string(to_string(o.method)));
  kv("status", std::string(to_string(o.result.status)));
  kv("message", o.error.empty() ? o.result.message : o.error);
  kv("distance_angstrom", num(o.distance));
  kv("pool_size", std::to_string(o.pool_size));
  kv("sector_dimension", std::to_string(o.sector_dim));
  kv("iterations", std::to_string(o.result.iterations));
  kv("E_final", num(o.result.E));
  kv("eps_TA_final", num(o.result.eps_TA));
  kv("eta0", num(o.result.eta0));
  kv("measurements_residue_sweep", std::to_string(o.result.measurements.residue_sweep));
  kv("measurements_line_search", std::to_string(o.result.measurements.line_search));
  kv("measurements_energy", std::to_string(o.result.measurements.energy));
  kv("measurements_gradient", std::to_string(o.result.measurements.gradient));
  kv("energy_measurements", std::to_string(o.result.measurements.total()));
  kv("fci_sidecar", num(o.fci_sidecar));
  kv("error_vs_sidecar", num(o.result.E - o.fci_sidecar));
  kv("E_gs_oracle", num(o.e_gs));
  kv("E_es_oracle", num(o.e_es));
  kv("eps_exact", num(o.eps_exact));
  kv("eps_T_full", num(o.eps_T_full));
  kv("gamma_fit", num(o.gamma_fit));
  kv("gamma_lb", num(o.gamma_lb));
  return s;
}

std::string sweep_row(const RunOutcome& o) {
  const bool failed = !o.error.empty();
  return fmt::format(
      "{},{},{},{},{},{},{},{},{},{},{},{},{},{}", to_string(o.method),
      csv_escape(o.fixture.stem().string()), num(o.distance),
      failed ? std::string() : num(o.result.E), num(o.eps_exact),
      failed ? std::string() : num(o.result.eps_TA), num(o.eps_T_full),
      o.result.converged() ? 1 : 0, failed ? std::string() : std::to_string(o.result.iterations),
      failed ? std::string() : std::to_string(o.result.measurements.total()),
      num(o.gamma_fit), num(o.gamma_lb), to_string(o.result.status),
      csv_escape(failed ? o.error : o.result.message));
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
  glob_t g{};
  std::vector<fs::path> out;
  if (::glob(pattern.c_str(), 0, nullptr, &g) == 0)
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  globfree(&g);
  std::sort(out.begin(), out.end());
  return out;
}

int run_single(const RunConfig& cfg, RunOutcome* outcome) {
  cfg.validate();
  if (cfg.methods.size() != 1)
    throw std::invalid_argument("a single run takes exactly one method");
  RunOutcome o = run_point(cfg.fcidump, cfg.methods.front(), cfg);
  write_atomic(cfg.output_dir / "trace.csv", trace_csv(o.result));
  write_atomic(cfg.output_dir / "summary.txt", summary_text(o));
  const int code = exit_code_for(o.result.status);
  if (outcome) *outcome = std::move(o);
  return code;
}

std::vector<RunOutcome> run_sweep(const RunConfig& cfg) {
  cfg.validate();
  const std::vector<fs::path> files = expand_glob(cfg.fixtures);
  if (files.empty())
    std::cerr << fmt::format("warning: no fixtures match '{}'\n", cfg.fixtures);

  std::vector<std::vector<RunOutcome>> per_file(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < files.size();) {
      per_file[i] = run_fixture(files[i], cfg);
      for (RunOutcome& o : per_file[i]) {
        if (!o.error.empty()) continue;
        try {
          write_atomic(cfg.output_dir / "traces" /
                           fmt::format("{}_{}.csv", to_string(o.method),
                                       o.fixture.stem().string()),
                       trace_csv(o.result));
        } catch (const std::exception& e) {
          o.error = e.what();
        }
      }
    }
  };
  const int n_workers =
      static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), files.size()));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  // Rows grouped by method, then fixture order, independent of scheduling.
  std::vector<RunOutcome> rows;
  for (std::size_t m = 0; m < cfg.methods.size(); ++m)
    for (auto& outs : per_file) rows.push_back(std::move(outs[m]));

  std::string table = std::string(kSweepHeader) + "\n";
  for (const RunOutcome& o : rows) table += sweep_row(o) + "\n";
  write_atomic(cfg.output_dir / "summary.csv", table);
  return rows;
}

}  // namespace pqe
