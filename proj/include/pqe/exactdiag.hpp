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

#ifndef PQE_EXACTDIAG_HPP
#define PQE_EXACTDIAG_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

#include "pqe/fock.hpp"

namespace pqe {

class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// Ground state, first distinct excited level and ground eigenvector of a
/// sector Hamiltonian. e_es is +inf when the sector has no level above e_gs.
struct SpectralOracle {
  double e_gs = 0.0;
  double e_es = 0.0;
  StateVector gs_vector;
  Eigen::VectorXd eigenvalues;  // lowest k found, ascending
  double residual = 0.0;        // ||H gs - e_gs gs||_2
  std::vector<std::string> warnings;
};

struct LanczosOptions {
  int max_iterations = 2000;
  double tolerance = 1e-11;
  std::size_t dense_cutoff = 512;
  unsigned seed = 12345;
};

/// Levels closer than this to e_gs count as degenerate with it.
inline constexpr double kDegeneracyTolerance = 1e-10;

SpectralOracle solve(const SparseHamiltonian& H, int k = 3,
                     const LanczosOptions& opts = {});

/// Lanczos with full reorthogonalization; exposed for testing the iterative
/// path on small matrices that would otherwise take the dense route.
SpectralOracle solve_lanczos(const SparseHamiltonian& H, int k,
                             const LanczosOptions& opts = {});

}  // namespace pqe

#endif  // PQE_EXACTDIAG_HPP
