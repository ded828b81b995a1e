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

#include "pqe/integrals.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <tuple>

namespace pqe {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

SpinOrbitalIntegrals::SpinOrbitalIntegrals(int spin_orbitals, int electrons)
    : m(spin_orbitals),
      n_electrons(electrons),
      h(Eigen::MatrixXd::Zero(spin_orbitals, spin_orbitals)),
      v(static_cast<std::size_t>(spin_orbitals) * spin_orbitals *
            spin_orbitals * spin_orbitals,
        0.0),
      orbital_energies(Eigen::VectorXd::Zero(spin_orbitals)) {}

std::size_t SpinOrbitalIntegrals::two_body_nonzeros(double tol) const {
  return static_cast<std::size_t>(std::count_if(
      v.begin(), v.end(), [tol](double x) { return std::abs(x) > tol; }));
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

std::optional<int> header_int(const std::string& header, const char* key) {
  std::regex re(std::string("(^|[^A-Z0-9_])") + key + R"(\s*=\s*(-?\d+))");
  std::smatch m;
  if (std::regex_search(header, m, re)) return std::stoi(m[2].str());
  return std::nullopt;
}

// Fortran writers sometimes emit 1.0D-03.
double parse_real(std::string tok, std::size_t line) {
  std::replace(tok.begin(), tok.end(), 'D', 'E');
  std::replace(tok.begin(), tok.end(), 'd', 'e');
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(line, fmt::format("cannot parse value '{}'", tok));
  }
  if (used != tok.size())
    throw ParseError(line, fmt::format("cannot parse value '{}'", tok));
  return value;
}

int parse_index(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(line, fmt::format("cannot parse index '{}'", tok));
  }
  if (used != tok.size())
    throw ParseError(line, fmt::format("cannot parse index '{}'", tok));
  return value;
}

}  // namespace

SpatialIntegrals parse_fcidump_spatial(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::string header;
  bool in_header = false;
  bool header_done = false;

  while (!header_done && std::getline(in, line)) {
    ++lineno;
    const std::string u = upper(trim(line));
    if (u.empty()) continue;
    if (!in_header) {
      if (u.rfind("&FCI", 0) != 0)
        throw HeaderError(
            fmt::format("line {}: expected '&FCI' namelist header", lineno));
      in_header = true;
    }
    header += ' ';
    header += u;
    if (u.find("&END") != std::string::npos || u == "/" ||
        (u.size() > 1 && u.back() == '/'))
      header_done = true;
  }
  if (!header_done) throw HeaderError("unterminated or missing FCIDUMP header");

  const auto norb = header_int(header, "NORB");
  const auto nelec = header_int(header, "NELEC");
  if (!norb) throw HeaderError("FCIDUMP header lacks NORB");
  if (!nelec) throw HeaderError("FCIDUMP header lacks NELEC");
  if (*norb <= 0) throw HeaderError("NORB must be positive");
  if (*nelec < 0 || *nelec > 2 * *norb)
    throw HeaderError(fmt::format("NELEC={} incompatible with NORB={}", *nelec,
                                  *norb));
  if (2 * *norb > 64)
    throw HeaderError("at most 32 spatial orbitals are supported");

  SpatialIntegrals out;
  out.norb = *norb;
  out.nelec = *nelec;
  out.ms2 = header_int(header, "MS2").value_or(*nelec % 2);
  out.h = Eigen::MatrixXd::Zero(out.norb, out.norb);
  out.eri.assign(static_cast<std::size_t>(out.norb) * out.norb * out.norb *
                     out.norb,
                 0.0);

  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::istringstream ss(t);
    std::vector<std::string> tok;
    for (std::string w; ss >> w;) tok.push_back(w);
    if (tok.size() != 5)
      throw ParseError(lineno, fmt::format("expected 5 fields, found {}",
                                           tok.size()));
    const double value = parse_real(tok[0], lineno);
    int idx[4];
    for (int a = 0; a < 4; ++a) {
      idx[a] = parse_index(tok[a + 1], lineno);
      if (idx[a] < 0 || idx[a] > out.norb)
        throw ValidationError(fmt::format(
            "line {}: orbital index {} outside [0, {}]", lineno, idx[a],
            out.norb));
    }
    const auto [i, j, k, l] = std::tie(idx[0], idx[1], idx[2], idx[3]);
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      out.e_core = value;
    } else if (i > 0 && j > 0 && k > 0 && l > 0) {
      const int p = i - 1, q = j - 1, r = k - 1, s = l - 1;
      for (auto [a, b, c, d] : {std::array{p, q, r, s}, std::array{q, p, r, s},
                                std::array{p, q, s, r}, std::array{q, p, s, r},
                                std::array{r, s, p, q}, std::array{s, r, p, q},
                                std::array{r, s, q, p}, std::array{s, r, q, p}})
        out.chem(a, b, c, d) = value;
    } else if (i > 0 && j > 0 && k == 0 && l == 0) {
      out.h(i - 1, j - 1) = value;
      out.h(j - 1, i - 1) = value;
    } else if (i > 0 && j == 0 && k == 0 && l == 0) {
      // orbital energy record; not used
    } else {
      throw ValidationError(fmt::format(
          "line {}: unsupported index pattern {} {} {} {}", lineno, i, j, k,
          l));
    }
  }
  return out;
}

SpinOrbitalIntegrals expand_to_spin_orbitals(const SpatialIntegrals& spatial) {
  const int n = spatial.norb;
  SpinOrbitalIntegrals ints(2 * n, spatial.nelec);
  ints.ms2 = spatial.ms2;
  ints.e_core = spatial.e_core;
  for (int p = 0; p < 2 * n; ++p)
    for (int q = 0; q < 2 * n; ++q)
      if (p % 2 == q % 2) ints.h(p, q) = spatial.h(p / 2, q / 2);

  // <pq|rs> = (pr|qs), nonzero when spin(p)=spin(r) and spin(q)=spin(s).
  for (int p = 0; p < 2 * n; ++p)
    for (int q = 0; q < 2 * n; ++q)
      for (int r = 0; r < 2 * n; ++r) {
        if (p % 2 != r % 2) continue;
        for (int s = 0; s < 2 * n; ++s) {
          if (q % 2 != s % 2) continue;
          ints.two_body(p, q, r, s) = spatial.chem(p / 2, r / 2, q / 2, s / 2);
        }
      }
  ints.orbital_energies = fock_orbital_energies(ints);
  return ints;
}

SpatialIntegrals contract_to_spatial(const SpinOrbitalIntegrals& ints) {
  if (ints.m % 2 != 0)
    throw ValidationError("odd spin-orbital count cannot be contracted");
  SpatialIntegrals out;
  out.norb = ints.m / 2;
  out.nelec = ints.n_electrons;
  out.ms2 = ints.ms2;
  out.e_core = ints.e_core;
  out.h = Eigen::MatrixXd::Zero(out.norb, out.norb);
  out.eri.assign(static_cast<std::size_t>(out.norb) * out.norb * out.norb *
                     out.norb,
                 0.0);
  for (int i = 0; i < out.norb; ++i)
    for (int j = 0; j < out.norb; ++j) out.h(i, j) = ints.h(2 * i, 2 * j);
  for (int i = 0; i < out.norb; ++i)
    for (int j = 0; j < out.norb; ++j)
      for (int k = 0; k < out.norb; ++k)
        for (int l = 0; l < out.norb; ++l)
          out.chem(i, j, k, l) = ints.two_body(2 * i, 2 * k, 2 * j, 2 * l);
  return out;
}

SpinOrbitalIntegrals parse_fcidump(std::istream& in) {
  return expand_to_spin_orbitals(parse_fcidump_spatial(in));
}

SpinOrbitalIntegrals read_fcidump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error(
        fmt::format("cannot open FCIDUMP file '{}'", path.string()));
  return parse_fcidump(in);
}

Eigen::VectorXd fock_orbital_energies(const SpinOrbitalIntegrals& ints) {
  Eigen::VectorXd eps(ints.m);
  for (int p = 0; p < ints.m; ++p) {
    double e = ints.h(p, p);
    for (int i = 0; i < ints.n_electrons; ++i)
      e += ints.two_body(p, i, p, i) - ints.two_body(p, i, i, p);
    eps(p) = e;
  }
  return eps;
}

void attach_orbital_energies(SpinOrbitalIntegrals& ints,
                             const std::vector<double>& spatial_energies) {
  if (static_cast<int>(spatial_energies.size()) * 2 != ints.m)
    throw ValidationError(fmt::format(
        "{} orbital energies given for {} spatial orbitals",
        spatial_energies.size(), ints.m / 2));
  for (int p = 0; p < ints.m; ++p) ints.orbital_energies(p) = spatial_energies[p / 2];
}

double hf_energy(const SpinOrbitalIntegrals& ints) {
  if (ints.n_electrons > ints.m)
    throw ValidationError("more electrons than spin-orbitals");
  double e = ints.e_core;
  for (int i = 0; i < ints.n_electrons; ++i) {
    e += ints.h(i, i);
    for (int j = 0; j < ints.n_electrons; ++j)
      e += 0.5 * (ints.two_body(i, j, i, j) - ints.two_body(i, j, j, i));
  }
  return e;
}

FixtureMetadata parse_metadata(std::istream& in) {
  FixtureMetadata meta;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError(lineno, "expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    meta.entries[key] = value;
    if (key == "bond_distance_angstrom") {
      meta.bond_distance_angstrom = parse_real(value, lineno);
    } else if (key == "hf_energy") {
      meta.hf_energy = parse_real(value, lineno);
    } else if (key == "fci_ground_energy") {
      meta.fci_ground_energy = parse_real(value, lineno);
    } else if (key == "fci_first_excited_energy") {
      meta.fci_first_excited_energy = parse_real(value, lineno);
    } else if (key == "orbital_energies") {
      std::stringstream ss(value);
      for (std::string tok; std::getline(ss, tok, ',');)
        meta.orbital_energies.push_back(parse_real(trim(tok), lineno));
    }
  }
  return meta;
}

FixtureMetadata read_metadata(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error(
        fmt::format("cannot open metadata file '{}'", path.string()));
  return parse_metadata(in);
}

std::filesystem::path metadata_path_for(const std::filesystem::path& fcidump) {
  auto p = fcidump;
  p.replace_extension(".meta");
  return p;
}

Fixture load_fixture(const std::filesystem::path& fcidump) {
  Fixture fx{fcidump, read_fcidump(fcidump), std::nullopt};
  const auto meta_path = metadata_path_for(fcidump);
  if (std::filesystem::exists(meta_path)) {
    fx.meta = read_metadata(meta_path);
    if (!fx.meta->orbital_energies.empty())
      attach_orbital_energies(fx.ints, fx.meta->orbital_energies);
  }
  return fx;
}

}  // namespace pqe
