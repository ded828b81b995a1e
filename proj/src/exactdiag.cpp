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

#include "pqe/exactdiag.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <random>

namespace pqe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kResidualLimit = 1e-9;

double first_above(const Eigen::VectorXd& evals, double e_gs) {
  for (Eigen::Index i = 1; i < evals.size(); ++i)
    if (evals(i) > e_gs + kDegeneracyTolerance) return evals(i);
  return kInf;
}

void finish(SpectralOracle& out, const SparseHamiltonian& H, Eigen::VectorXd gs) {
  if (gs.size() > 0) {
    // deterministic phase: largest component positive
    Eigen::Index imax = 0;
    gs.cwiseAbs().maxCoeff(&imax);
    if (gs(imax) < 0) gs = -gs;
  }
  gs.normalize();
  out.residual = (H.matrix * gs - out.e_gs * gs).norm();
  out.gs_vector = StateVector{H.basis, std::move(gs)};
  if (!(out.residual <= kResidualLimit))
    throw ConvergenceError(
        fmt::format("ground eigenvector residual {:.3e} exceeds {:.0e}",
                    out.residual, kResidualLimit),
        out.residual);
}

int clip_k(SpectralOracle& out, int k, std::size_t dim) {
  if (k < 1) k = 1;
  if (static_cast<std::size_t>(k) > dim) {
    out.warnings.push_back(
        fmt::format("k={} exceeds sector dimension {}; clipped", k, dim));
    k = static_cast<int>(dim);
  }
  return k;
}

}  // namespace

SpectralOracle solve_lanczos(const SparseHamiltonian& H, int k,
                             const LanczosOptions& opts) {
  const auto n = static_cast<Eigen::Index>(H.dim());
  if (n == 0) throw DimensionError("empty sector");
  SpectralOracle out;
  k = clip_k(out, k, static_cast<std::size_t>(n));

  const Eigen::Index max_steps =
      std::min<Eigen::Index>(n, std::max(opts.max_iterations, k + 1));
  Eigen::MatrixXd V(n, max_steps);
  std::vector<double> alpha, beta;

  std::mt19937 rng(opts.seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  v.normalize();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  Eigen::Index steps = 0;
  double worst = kInf;
  for (Eigen::Index j = 0; j < max_steps; ++j) {
    V.col(j) = v;
    Eigen::VectorXd w = H.matrix * v;
    const double a = v.dot(w);
    w -= a * v;
    if (j > 0) w -= beta.back() * V.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      const auto Vj = V.leftCols(j + 1);
      w -= Vj * (Vj.transpose() * w);
    }
    alpha.push_back(a);
    const double b = w.norm();
    steps = j + 1;

    const bool breakdown = b < 1e-13 * std::max(1.0, std::abs(a));
    if (steps >= k || breakdown || steps == max_steps) {
      Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), steps);
      Eigen::VectorXd sub = steps > 1
                                ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(
                                      beta.data(), steps - 1))
                                : Eigen::VectorXd();
      tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
      const int found = static_cast<int>(std::min<Eigen::Index>(k, steps));
      worst = 0.0;
      for (int i = 0; i < found; ++i)
        worst = std::max(worst, std::abs(b * tri.eigenvectors()(steps - 1, i)) /
                                    std::max(1.0, std::abs(tri.eigenvalues()(i))));
      if (breakdown || (found == k && worst < opts.tolerance)) break;
    }
    beta.push_back(b);
    v = w / b;
  }

  const int found = static_cast<int>(std::min<Eigen::Index>(k, steps));
  if (worst >= opts.tolerance && steps < n)
    out.warnings.push_back(fmt::format(
        "Lanczos stopped after {} steps with Ritz residual {:.3e}", steps, worst));
  if (found < k)
    out.warnings.push_back(
        fmt::format("Krylov space exhausted after {} distinct levels", found));
  out.eigenvalues = tri.eigenvalues().head(found);
  out.e_gs = out.eigenvalues(0);
  out.e_es = first_above(tri.eigenvalues(), out.e_gs);
  finish(out, H, V.leftCols(steps) * tri.eigenvectors().col(0));
  return out;
}

SpectralOracle solve(const SparseHamiltonian& H, int k, const LanczosOptions& opts) {
  const std::size_t n = H.dim();
  if (n == 0) throw DimensionError("empty sector");
  if (n > opts.dense_cutoff) return solve_lanczos(H, k, opts);

  SpectralOracle out;
  k = clip_k(out, k, n);
  const Eigen::MatrixXd dense(H.matrix);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("dense eigensolver failed", kInf);
  out.eigenvalues = es.eigenvalues().head(k);
  out.e_gs = es.eigenvalues()(0);
  out.e_es = first_above(es.eigenvalues(), out.e_gs);
  finish(out, H, es.eigenvectors().col(0));
  return out;
}

}  // namespace pqe
