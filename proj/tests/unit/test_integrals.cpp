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

#include <gtest/gtest.h>

#include <array>
#include <fstream>
#include <sstream>

#include "pqe/integrals.hpp"
#include "test_support.hpp"

namespace {

using testing_support::fixture;
using testing_support::fixture_path;

constexpr const char* kTwoOrbital =
    " &FCI NORB=2,NELEC=2,MS2=0,\n"
    "  ORBSYM=1,1,\n"
    "  ISYM=1,\n"
    " &END\n"
    " 0.5  1 1 1 1\n"
    " 0.25 2 1 1 1\n"
    " 0.125 2 1 2 1\n"
    " 0.3  2 2 1 1\n"
    " 0.4  2 2 2 2\n"
    " -1.0 1 1 0 0\n"
    " 0.1  2 1 0 0\n"
    " -0.5 2 2 0 0\n"
    " 0.7  0 0 0 0\n";

pqe::SpatialIntegrals parse_spatial(const std::string& text) {
  std::istringstream in(text);
  return pqe::parse_fcidump_spatial(in);
}

TEST(Fcidump, ReadsHeaderAndCore) {
  const auto s = parse_spatial(kTwoOrbital);
  EXPECT_EQ(s.norb, 2);
  EXPECT_EQ(s.nelec, 2);
  EXPECT_EQ(s.ms2, 0);
  EXPECT_DOUBLE_EQ(s.e_core, 0.7);
}

TEST(Fcidump, ExpandsEightfoldSymmetry) {
  const auto s = parse_spatial(kTwoOrbital);
  // (21|11) given once; all its images must agree.
  for (auto [i, j, k, l] : {std::array{1, 0, 0, 0}, std::array{0, 1, 0, 0},
                            std::array{0, 0, 1, 0}, std::array{0, 0, 0, 1}})
    EXPECT_DOUBLE_EQ(s.chem(i, j, k, l), 0.25);
  EXPECT_DOUBLE_EQ(s.chem(0, 1, 0, 1), 0.125);
  EXPECT_DOUBLE_EQ(s.chem(1, 0, 0, 1), 0.125);
  EXPECT_DOUBLE_EQ(s.chem(0, 0, 1, 1), 0.3);
  EXPECT_DOUBLE_EQ(s.h(0, 1), 0.1);
  EXPECT_DOUBLE_EQ(s.h(1, 0), 0.1);
}

TEST(Fcidump, SpinOrbitalLayoutIsInterleaved) {
  std::istringstream in(kTwoOrbital);
  const auto ints = pqe::parse_fcidump(in);
  ASSERT_EQ(ints.m, 4);
  EXPECT_DOUBLE_EQ(ints.h(0, 2), 0.1);  // alpha-alpha
  EXPECT_DOUBLE_EQ(ints.h(1, 3), 0.1);  // beta-beta
  EXPECT_DOUBLE_EQ(ints.h(0, 3), 0.0);  // spin-forbidden
  // <pq|rs> = (pr|qs): <0a 1a|0a 1a> = (00|11).
  EXPECT_DOUBLE_EQ(ints.two_body(0, 2, 0, 2), 0.3);
  EXPECT_DOUBLE_EQ(ints.two_body(0, 3, 0, 3), 0.3);
  EXPECT_DOUBLE_EQ(ints.two_body(0, 3, 1, 2), 0.0);  // spin flips on one electron
}

TEST(Fcidump, TwoBodyHasPairExchangeSymmetry) {
  const auto ints = fixture("h4", 1.0).ints;
  for (int p = 0; p < ints.m; ++p)
    for (int q = 0; q < ints.m; ++q)
      for (int r = 0; r < ints.m; ++r)
        for (int s = 0; s < ints.m; ++s) {
          ASSERT_DOUBLE_EQ(ints.two_body(p, q, r, s), ints.two_body(q, p, s, r));
          ASSERT_DOUBLE_EQ(ints.two_body(p, q, r, s), ints.two_body(r, s, p, q));
        }
}

TEST(Fcidump, RoundTripsThroughSpinOrbitals) {
  std::ifstream in(fixture_path("lih", 1.5));
  const auto spatial = pqe::parse_fcidump_spatial(in);
  const auto back = pqe::contract_to_spatial(pqe::expand_to_spin_orbitals(spatial));
  EXPECT_EQ(back.norb, spatial.norb);
  EXPECT_DOUBLE_EQ(back.e_core, spatial.e_core);
  EXPECT_LT((back.h - spatial.h).cwiseAbs().maxCoeff(), 1e-15);
  for (std::size_t i = 0; i < spatial.eri.size(); ++i)
    ASSERT_DOUBLE_EQ(back.eri[i], spatial.eri[i]);
}

TEST(Fcidump, MissingNorbIsHeaderError) {
  EXPECT_THROW(parse_spatial(" &FCI NELEC=2,\n &END\n 0.1 0 0 0 0\n"), pqe::HeaderError);
}

TEST(Fcidump, UnterminatedHeaderIsHeaderError) {
  EXPECT_THROW(parse_spatial(" &FCI NORB=2,NELEC=2,\n"), pqe::HeaderError);
}

TEST(Fcidump, BadValueReportsLine) {
  const std::string text = " &FCI NORB=2,NELEC=2,\n &END\n 0.5 1 1 1 1\n abc 1 1 1 1\n";
  try {
    parse_spatial(text);
    FAIL() << "expected ParseError";
  } catch (const pqe::ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(Fcidump, IndexBeyondNorbIsValidationError) {
  EXPECT_THROW(parse_spatial(" &FCI NORB=2,NELEC=2,\n &END\n 0.5 3 1 1 1\n"),
               pqe::ValidationError);
}

TEST(Fcidump, TooManyElectronsIsRejected) {
  EXPECT_THROW(parse_spatial(" &FCI NORB=1,NELEC=3,\n &END\n 0.5 1 1 1 1\n"),
               pqe::HeaderError);
}

TEST(Fcidump, MissingFileThrows) {
  EXPECT_THROW(pqe::read_fcidump("/nonexistent/file.fcidump"), std::runtime_error);
}

TEST(Fixtures, HartreeFockEnergyMatchesSidecar) {
  for (const auto& [mol, d] : {std::pair{"h2", 0.7414}, {"h4", 1.5}, {"lih", 2.0}, {"beh2", 1.5}}) {
    const auto fx = fixture(mol, d);
    ASSERT_TRUE(fx.meta && fx.meta->hf_energy);
    EXPECT_NEAR(pqe::hf_energy(fx.ints), *fx.meta->hf_energy, 1e-9) << mol << " " << d;
  }
}

TEST(Fixtures, FockDiagonalMatchesSidecarOrbitalEnergies) {
  for (const auto& [mol, d] : {std::pair{"h2", 0.7414}, {"h6", 1.0}, {"lih", 2.0}}) {
    const auto fx = fixture(mol, d);
    ASSERT_TRUE(fx.meta);
    const Eigen::VectorXd eps = pqe::fock_orbital_energies(fx.ints);
    const auto& ref = fx.meta->orbital_energies;
    ASSERT_EQ(2 * ref.size(), static_cast<std::size_t>(eps.size()));
    for (std::size_t i = 0; i < ref.size(); ++i) {
      // Sidecar values carry the SCF convergence threshold.
      EXPECT_NEAR(eps(2 * i), ref[i], 1e-6);
      EXPECT_NEAR(eps(2 * i + 1), ref[i], 1e-6);
    }
  }
}

TEST(Metadata, ParsesKeyValueLines) {
  std::istringstream in(
      "# comment\nmolecule = h2\nbond_distance_angstrom = 0.75\n"
      "orbital_energies = -0.5, 0.6\n");
  const auto m = pqe::parse_metadata(in);
  EXPECT_EQ(m.entries.at("molecule"), "h2");
  EXPECT_DOUBLE_EQ(*m.bond_distance_angstrom, 0.75);
  ASSERT_EQ(m.orbital_energies.size(), 2u);
  EXPECT_DOUBLE_EQ(m.orbital_energies[1], 0.6);
  EXPECT_FALSE(m.fci_ground_energy);
}

TEST(Metadata, RejectsMalformedLine) {
  std::istringstream in("molecule h2\n");
  EXPECT_THROW(pqe::parse_metadata(in), pqe::ParseError);
}

TEST(Metadata, SidecarPathSwapsExtension) {
  EXPECT_EQ(pqe::metadata_path_for("a/b/h2_0.7414.fcidump"),
            std::filesystem::path("a/b/h2_0.7414.meta"));
}

}  // namespace
