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

// Experiment driver behind the `pqe` executable: single runs and sweeps over
// fixture sets, with CSV / key=value output.

#ifndef PQE_EXPERIMENT_HPP
#define PQE_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pqe/optimizers.hpp"

namespace pqe {

namespace exit_code {
inline constexpr int converged = 0;
inline constexpr int not_converged = 2;
inline constexpr int stalled = 3;
inline constexpr int usage = 64;
}  // namespace exit_code

int exit_code_for(RunStatus s) noexcept;

struct RunConfig {
  std::filesystem::path fcidump;
  std::string fixtures;  // glob pattern
  std::vector<Method> methods{Method::algorithm1};
  int max_rank = 2;
  OptimizerConfig optimizer;
  bool oracle = true;
  std::filesystem::path output_dir = "pqe_out";
  std::uint64_t seed = 12345;
  int jobs = 1;

  void validate() const;  // throws std::invalid_argument
};

/// Everything known about one (fixture, method) run.
struct RunOutcome {
  std::filesystem::path fixture;
  Method method = Method::algorithm1;
  double distance = kNaN;
  double fci_sidecar = kNaN;
  std::size_t pool_size = 0;
  std::size_t sector_dim = 0;
  OptimizerResult result;
  // Oracle columns, NaN when the oracle is off or the bound is inapplicable.
  double e_gs = kNaN;
  double e_es = kNaN;
  double eps_exact = kNaN;
  double eps_T_full = kNaN;
  double gamma_fit = kNaN;
  double gamma_lb = kNaN;
  std::string error;  // set when the point could not be run at all
};

/// Loads, optimizes and evaluates one point. Never writes files. Errors from
/// loading or optimization are returned in `error` when `capture_errors`.
RunOutcome run_point(const std::filesystem::path& fcidump, Method method,
                     const RunConfig& cfg, bool capture_errors = false);

/// Writes `contents` to `path` via a temporary file and rename.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

std::string trace_csv(const OptimizerResult& result);
std::string summary_text(const RunOutcome& outcome);

inline constexpr const char* kSweepHeader =
    "method,fixture,distance_angstrom,E_final,eps_exact,eps_TA_final,eps_T_full,"
    "converged,iterations,energy_measurements,gamma_fit,gamma_lb,status,error";
std::string sweep_row(const RunOutcome& outcome);

/// Sorted matches of a glob pattern; empty when nothing matches.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

/// Single fixture, single method. Writes <out>/trace.csv and <out>/summary.txt
/// and returns the process exit code. Load failures propagate.
int run_single(const RunConfig& cfg, RunOutcome* outcome = nullptr);

/// Every method on every fixture matching cfg.fixtures. Writes
/// <out>/summary.csv and <out>/traces/<method>_<fixture>.csv. Per-point
/// failures land in the row.
std::vector<RunOutcome> run_sweep(const RunConfig& cfg);

}  // namespace pqe

#endif  // PQE_EXPERIMENT_HPP
