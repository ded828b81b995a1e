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

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>

#include "pqe/experiment.hpp"

int main(int argc, char** argv) {
  pqe::RunConfig cfg;
  pqe::OptimizerConfig& oc = cfg.optimizer;
  std::string fcidump;
  std::string out = cfg.output_dir.string();
  std::vector<std::string> methods{"algorithm1"};
  std::string oracle = "on";

  CLI::App app{"Projective quantum eigensolver simulator"};
  app.set_config("--config", "", "Read options from a TOML/INI file; flags win");
  auto* single = app.add_option("--fcidump", fcidump, "FCIDUMP file for a single run");
  auto* sweep = app.add_option("--fixtures", cfg.fixtures,
                               "Glob of FCIDUMP files for a sweep (quote it)");
  single->excludes(sweep);
  app.add_option("--method", methods,
                 "standard, approx_mnr, approx_nr, hybrid, algorithm1, vqe_bfgs "
                 "(comma separated for sweeps)")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--max-rank", cfg.max_rank, "Highest excitation rank in the pool")
      ->check(CLI::Range(1, 4))
      ->capture_default_str();
  app.add_option("--epsilon", oc.epsilon, "Stopping threshold on eps_T^A")
      ->capture_default_str();
  app.add_option("--eta-threshold", oc.eta_threshold, "Diagonal/gradient-like switch")
      ->capture_default_str();
  app.add_option("--hybrid-threshold", oc.hybrid_threshold, "Hybrid MP/NR switch")
      ->capture_default_str();
  app.add_option("--tau-reset", oc.tau_reset, "Inverse-Jacobian reset step size")
      ->capture_default_str();
  app.add_option("--armijo-c", oc.armijo_c, "Sufficient-decrease constant")
      ->capture_default_str();
  app.add_option("--alpha-threshold", oc.alpha_threshold, "Line-search stall threshold")
      ->capture_default_str();
  app.add_option("--max-iters", oc.max_iters, "Iteration cap")->capture_default_str();
  app.add_option("--oracle", oracle, "Exact diagonalization columns")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for randomized utilities")->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "Sweep worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return pqe::exit_code::usage;
  }

  cfg.methods.clear();
  for (const std::string& m : methods) {
    auto parsed = pqe::parse_method(m);
    if (!parsed) {
      std::cerr << fmt::format("error: unknown method '{}'\n", m);
      return pqe::exit_code::usage;
    }
    cfg.methods.push_back(*parsed);
  }
  cfg.oracle = oracle == "on";
  cfg.output_dir = out;

  try {
    if (!fcidump.empty()) {
      cfg.fcidump = fcidump;
      pqe::RunOutcome o;
      const int code = pqe::run_single(cfg, &o);
      std::cout << pqe::summary_text(o);
      return code;
    }
    if (!cfg.fixtures.empty()) {
      const auto rows = pqe::run_sweep(cfg);
      std::size_t ok = 0;
      for (const auto& r : rows) ok += r.result.converged() ? 1 : 0;
      std::cout << fmt::format("{} of {} runs converged; table in {}\n", ok, rows.size(),
                               (cfg.output_dir / "summary.csv").string());
      return 0;
    }
    std::cerr << "error: give --fcidump FILE or --fixtures GLOB\n" << app.help();
    return pqe::exit_code::usage;
  } catch (const std::exception& e) {
    std::cerr << fmt::format("error: {}\n", e.what());
  }
  return pqe::exit_code::usage;
}
