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

#ifndef PQE_INTEGRALS_HPP
#define PQE_INTEGRALS_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pqe {

/// Malformed FCIDUMP record or sidecar line. Carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Missing or inconsistent FCIDUMP namelist header.
class HeaderError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Orbital index outside [0, NORB] or otherwise inconsistent data.
class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * One- and two-body coefficients of the electronic Hamiltonian over
 * spin-orbitals,
 *
 *     H = e_core + sum_pq h_pq a+_p a_q + 1/2 sum_pqrs v_pqrs a+_p a+_q a_s a_r
 *
 * with v in physicists' ordering, v_pqrs = <pq|rs> = (pr|qs).
 *
 * Spatial orbital P maps to spin-orbitals 2P (alpha) and 2P+1 (beta).
 * Dense storage: m is at most a few dozen for anything this code targets.
 */
struct SpinOrbitalIntegrals {
  int m = 0;
  int n_electrons = 0;
  int ms2 = 0;
  double e_core = 0.0;
  Eigen::MatrixXd h;
  std::vector<double> v;
  Eigen::VectorXd orbital_energies;

  SpinOrbitalIntegrals() = default;
  SpinOrbitalIntegrals(int spin_orbitals, int electrons);

  double& two_body(int p, int q, int r, int s) {
    return v[index4(p, q, r, s)];
  }
  double two_body(int p, int q, int r, int s) const {
    return v[index4(p, q, r, s)];
  }

  std::size_t index4(int p, int q, int r, int s) const {
    const auto mm = static_cast<std::size_t>(m);
    return ((static_cast<std::size_t>(p) * mm + q) * mm + r) * mm + s;
  }

  /// Count of two-body entries with |v| > tol.
  std::size_t two_body_nonzeros(double tol = 0.0) const;
};

/// Spatial-orbital integrals in chemists' notation, as stored in FCIDUMP.
struct SpatialIntegrals {
  int norb = 0;
  int nelec = 0;
  int ms2 = 0;
  double e_core = 0.0;
  Eigen::MatrixXd h;        // h(i,j)
  std::vector<double> eri;  // (ij|kl), full 8-fold expanded, norb^4

  double& chem(int i, int j, int k, int l) {
    return eri[idx(i, j, k, l)];
  }
  double chem(int i, int j, int k, int l) const {
    return eri[idx(i, j, k, l)];
  }

private:
  std::size_t idx(int i, int j, int k, int l) const {
    const auto n = static_cast<std::size_t>(norb);
    return ((static_cast<std::size_t>(i) * n + j) * n + k) * n + l;
  }
};

/// Reads the FCIDUMP namelist header and records into spatial integrals.
SpatialIntegrals parse_fcidump_spatial(std::istream& in);

/// Spatial (chemists') to spin-orbital (physicists') expansion.
SpinOrbitalIntegrals expand_to_spin_orbitals(const SpatialIntegrals& spatial);

/// Inverse of expand_to_spin_orbitals on the spin-adapted blocks.
SpatialIntegrals contract_to_spatial(const SpinOrbitalIntegrals& ints);

/// Parses an FCIDUMP stream. Orbital energies are filled from the Fock
/// diagonal; use attach_orbital_energies to override from a sidecar.
SpinOrbitalIntegrals parse_fcidump(std::istream& in);
SpinOrbitalIntegrals read_fcidump(const std::filesystem::path& path);

/// Fock-matrix diagonal eps_p = h_pp + sum_{i in occ} (v_pipi - v_piip)
/// on the reference determinant (n_electrons lowest spin-orbitals).
Eigen::VectorXd fock_orbital_energies(const SpinOrbitalIntegrals& ints);

/// Replaces orbital energies with spatial values (one per NORB).
void attach_orbital_energies(SpinOrbitalIntegrals& ints,
                             const std::vector<double>& spatial_energies);

/// E_HF = e_core + sum_occ h_ii + 1/2 sum_occ (v_ijij - v_ijji).
double hf_energy(const SpinOrbitalIntegrals& ints);

/// Sidecar metadata stored next to each fixture: `key = value` lines, `#`
/// comments. Unknown keys are kept verbatim.
struct FixtureMetadata {
  std::optional<double> bond_distance_angstrom;
  std::optional<double> hf_energy;
  std::optional<double> fci_ground_energy;
  std::optional<double> fci_first_excited_energy;
  std::vector<double> orbital_energies;
  std::map<std::string, std::string> entries;
};

FixtureMetadata parse_metadata(std::istream& in);
FixtureMetadata read_metadata(const std::filesystem::path& path);

/// Sidecar path convention: same stem, `.meta` extension.
std::filesystem::path metadata_path_for(const std::filesystem::path& fcidump);

/// A fixture: integrals plus optional sidecar. When the sidecar carries
/// orbital energies they replace the Fock-diagonal defaults.
struct Fixture {
  std::filesystem::path path;
  SpinOrbitalIntegrals ints;
  std::optional<FixtureMetadata> meta;
};

Fixture load_fixture(const std::filesystem::path& fcidump);

}  // namespace pqe

#endif  // PQE_INTEGRALS_HPP
