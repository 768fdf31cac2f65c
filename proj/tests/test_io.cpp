// Copyright 2026 The covchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>
#include <string>

#include "covchan/io.hpp"
#include "covchan/random.hpp"

namespace covchan {
namespace {

std::string fixture(const std::string& name) {
  return std::string(COVCHAN_FIXTURES) + "/" + name;
}

TEST(Io, MatrixRoundTripIsBitwise) {
  std::mt19937_64 rng(1);
  const CMatrix m = random::ginibre(3, 4, rng) * 1e-3;
  const CMatrix back = io::matrix_from_json(io::parse(io::dump(io::to_json(m))));
  EXPECT_EQ(back, m);
}

TEST(Io, ChannelRoundTripIsBitwise) {
  std::mt19937_64 rng(2);
  const Channel g = random::cptp_channel(3, 2, rng);
  const Channel back = io::channel_from_json(io::parse(io::dump(io::to_json(g))));
  ASSERT_EQ(back.kraus().size(), g.kraus().size());
  for (std::size_t k = 0; k < g.kraus().size(); ++k) EXPECT_EQ(back.kraus()[k], g.kraus()[k]);
}

TEST(Io, DecompositionRoundTripIsBitwise) {
  std::mt19937_64 rng(3);
  const Spectrum sp({0.0, 0.3, 1.7, 2.0});
  const SectorDecomposition d = decompose(random::covariant_channel(sp, rng), sp);
  const io::Json j = io::to_json(d);
  const SectorDecomposition back = io::decomposition_from_json(io::parse(io::dump(j)));
  EXPECT_EQ(back.spectrum(), d.spectrum());
  ASSERT_EQ(back.sectors().size(), d.sectors().size());
  for (std::size_t i = 0; i < d.sectors().size(); ++i) {
    EXPECT_EQ(back.sectors()[i].sigma(), d.sectors()[i].sigma());
    EXPECT_EQ(back.sectors()[i].mask, d.sectors()[i].mask);
  }
  EXPECT_EQ(io::dump(io::to_json(back)), io::dump(j));
}

TEST(Io, TimingReportRoundTrip) {
  const TimingChannelReport r =
      timing_report_from_coherence({1.0, Complex(0.25, 0.1), Complex(0.25, -0.1)}, 0.3, 1e-17);
  const io::Json j = io::to_json(r);
  EXPECT_EQ(io::dump(io::to_json(io::timing_report_from_json(io::parse(io::dump(j))))),
            io::dump(j));
}

TEST(Io, CapacityReportFields) {
  const io::Json j = io::to_json(capacity_report(CMatrix::Ones(2, 2)));
  EXPECT_TRUE(j.contains("coherent_information_bits"));
  EXPECT_TRUE(j["hadamard_bound_bits"].is_number());
  EXPECT_EQ(j["dim"], 2);
  const io::Json c = io::to_json(capacity_report(Channel::identity(2), DensityMatrix::maximally_mixed(2)));
  EXPECT_TRUE(c["hadamard_bound_bits"].is_null());
}

TEST(Io, ParseErrorNamesByteOffset) {
  try {
    io::read_file(fixture("malformed.json"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos) << e.what();
  }
}

TEST(Io, SchemaErrors) {
  EXPECT_THROW(io::matrix_from_json(io::parse(R"({"rows": 2, "cols": 2, "data": [[1,0]]})")),
               ParseError);
  EXPECT_THROW(io::matrix_from_json(io::parse(R"({"rows": 1, "cols": 1, "data": [[1]]})")),
               ParseError);
  EXPECT_THROW(io::channel_from_json(io::parse(R"({"dim_in": 2, "kraus": []})")), ParseError);
  EXPECT_THROW(io::spectrum_from_json(io::parse(R"({"energies": [0, 0]})")), DegenerateSpectrum);
}

TEST(Io, FixturesLoad) {
  const Spectrum qubit = io::spectrum_from_json(io::read_file(fixture("spectrum_qubit.json")));
  for (const char* name : {"identity.json", "dephasing.json", "amplitude_damping_0.3.json",
                           "amplitude_damping_0.5.json", "hadamard_gate.json"}) {
    const Channel g = io::channel_from_json(io::read_file(fixture(name)));
    EXPECT_TRUE(is_cptp(g).within(1e-12)) << name;
    EXPECT_EQ(g.dim_in(), qubit.size());
  }
  const Channel five = io::channel_from_json(io::read_file(fixture("random_covariant5.json")));
  const Spectrum sp5 = io::spectrum_from_json(io::read_file(fixture("spectrum5.json")));
  EXPECT_TRUE(is_cptp(five).within(1e-12));
  EXPECT_LT(covariance_defect(five, sp5), 1e-12);
}

TEST(Io, CsvUsesSeventeenDigits) {
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
  const SectorDecomposition d = decompose(Channel::identity(2), Spectrum({0.0, 1.0}));
  const std::string csv = io::masks_csv(d);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "sigma,row,col,re,im");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

}  // namespace
}  // namespace covchan
