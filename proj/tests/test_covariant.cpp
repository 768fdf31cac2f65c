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

#include <cmath>
#include <numbers>
#include <random>

#include "covchan/covariant.hpp"
#include "covchan/random.hpp"

namespace covchan {
namespace {

constexpr double kPi = std::numbers::pi;

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Channel amplitude_damping(double g) {
  return Channel({mat2(1, 0, 0, std::sqrt(1 - g)), mat2(0, std::sqrt(g), 0, 0)});
}

Channel full_dephasing() { return Channel({mat2(1, 0, 0, 0), mat2(0, 0, 0, 1)}); }

Channel hadamard_gate() {
  const double h = 1.0 / std::sqrt(2.0);
  return Channel({mat2(h, h, h, -h)});
}

const Spectrum kQubit({0.0, 1.0});

DensityMatrix basis_state(Index n, Index j) {
  CMatrix m = CMatrix::Zero(n, n);
  m(j, j) = 1.0;
  return DensityMatrix(m);
}

// Direct commutation check with the time evolution at a few times.
double commutation_defect(const Channel& g, const Spectrum& sp, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> time(-5.0, 5.0);
  double worst = 0.0;
  for (int rep = 0; rep < 4; ++rep) {
    const double t = time(rng);
    const CMatrix x = random::ginibre(sp.size(), sp.size(), rng);
    const CMatrix lhs = covchan::apply(g, evolve(sp, t, x));
    const CMatrix rhs = evolve(sp, t, covchan::apply(g, x));
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

TEST(Spectrum, Validation) {
  EXPECT_THROW(Spectrum({0.0, 1.0, 1.0}), DegenerateSpectrum);
  EXPECT_THROW(Spectrum({1.0, 0.0}), InvalidArgument);
  EXPECT_THROW(Spectrum({}), InvalidArgument);
  EXPECT_EQ(Spectrum::integer_ladder(3).energies(), (std::vector<double>{0, 1, 2}));
}

TEST(Evolve, FixedPointsAndPhaseFlip) {
  std::mt19937_64 rng(1);
  const DensityMatrix rho = random::density_matrix(2, rng);
  EXPECT_LT((evolve(kQubit, 0.0, rho.matrix()) - rho.matrix()).norm(), 1e-15);
  const CMatrix diag = rho.matrix().diagonal().asDiagonal();
  EXPECT_LT((evolve(kQubit, 2.7, diag) - diag).norm(), 1e-15);
  const CMatrix minus = mat2(0.5, -0.5, -0.5, 0.5);
  EXPECT_LT((evolve(kQubit, kPi, CMatrix::Constant(2, 2, 0.5)) - minus).norm(), 1e-15);
}

TEST(EnergyDifferences, Examples) {
  EXPECT_EQ(energy_differences(kQubit), (std::vector<double>{-1, 0, 1}));
  EXPECT_EQ(energy_differences(Spectrum::integer_ladder(3)),
            (std::vector<double>{-2, -1, 0, 1, 2}));
  const auto d = energy_differences(Spectrum({0.0, 1.0, 2.5}));
  const std::vector<double> expected{-2.5, -1.5, -1, 0, 1, 1.5, 2.5};
  ASSERT_EQ(d.size(), expected.size());
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(d[i], expected[i], 1e-15);
}

TEST(PartialShift, MapsLevelsWithinSpectrum) {
  const Spectrum sp({0.0, 1.0, 2.5});
  const PartialShift s = partial_shift(sp, 1.5);
  ASSERT_EQ(s.domain, (std::vector<Index>{1}));
  ASSERT_EQ(s.target, (std::vector<Index>{2}));
  EXPECT_EQ(s.matrix(2, 1), Complex(1.0));
  EXPECT_NEAR(s.matrix.cwiseAbs().sum(), 1.0, 0.0);
  EXPECT_TRUE(partial_shift(sp, 0.7).empty());
}

TEST(CovarianceDefect, Examples) {
  EXPECT_LT(covariance_defect(amplitude_damping(0.3), kQubit), 1e-12);
  EXPECT_LT(covariance_defect(full_dephasing(), kQubit), 1e-12);
  EXPECT_GT(covariance_defect(hadamard_gate(), kQubit), 0.2);
  EXPECT_NEAR(covariance_defect(hadamard_gate(), kQubit), 0.5, 1e-15);
}

TEST(CovarianceDefect, HadamardMaskChannelIsCovariant) {
  std::mt19937_64 rng(2);
  for (Index n = 2; n <= 5; ++n) {
    const CMatrix mask = random::unit_diagonal_mask(n, rng);
    const SectorDecomposition d(Spectrum::integer_ladder(n), {{0.0, mask}});
    EXPECT_LT(covariance_defect(reconstruct(d), Spectrum::integer_ladder(n)), 1e-12);
  }
}

TEST(CovarianceDefect, AgreesWithCommutationOracle) {
  std::mt19937_64 rng(3);
  const Spectrum sp({-0.4, 0.3, 1.1, 2.9});
  for (int rep = 0; rep < 10; ++rep) {
    const Channel cov = random::covariant_channel(sp, rng);
    EXPECT_LT(covariance_defect(cov, sp), 1e-12);
    EXPECT_LT(commutation_defect(cov, sp, rng), 1e-12);
    const Channel generic = random::cptp_channel(4, 2, rng);
    EXPECT_GT(covariance_defect(generic, sp), 1e-3);
    EXPECT_GT(commutation_defect(generic, sp, rng), 1e-3);
  }
}

TEST(ProjectCovariant, RenormalizedProjectionIsCptp) {
  std::mt19937_64 rng(4);
  const Spectrum sp = Spectrum::integer_ladder(4);
  const Channel g = random::cptp_channel(4, 3, rng);
  const ProjectedChannel p = project_covariant(g, sp, true);
  EXPECT_TRUE(is_cptp(p.channel).within(1e-10));
  EXPECT_LT(covariance_defect(p.channel, sp), 1e-12);
  EXPECT_GT(p.distance, 0.0);
}

TEST(Decompose, IdentityHasOneAllOnesSector) {
  const SectorDecomposition d = decompose(Channel::identity(2), kQubit);
  ASSERT_EQ(d.sectors().size(), 1u);
  EXPECT_EQ(d.sectors()[0].sigma(), 0.0);
  EXPECT_LT((d.sectors()[0].mask - CMatrix::Ones(2, 2)).norm(), 1e-15);
}

TEST(Decompose, DephasingHasIdentityMask) {
  const SectorDecomposition d = decompose(full_dephasing(), kQubit);
  ASSERT_EQ(d.sectors().size(), 1u);
  EXPECT_LT((d.at(0.0).mask - CMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(Decompose, AmplitudeDampingMasks) {
  for (double g : {0.3, 0.5}) {
    const SectorDecomposition d = decompose(amplitude_damping(g), kQubit);
    ASSERT_EQ(d.sectors().size(), 2u);
    const double c = std::sqrt(1 - g);
    EXPECT_LT((d.at(0.0).mask - mat2(1, c, c, 1 - g)).norm(), 1e-15);
    CMatrix m = CMatrix::Zero(2, 2);
    m(1, 1) = g;
    EXPECT_LT((d.at(-1.0).mask - m).norm(), 1e-15);
    EXPECT_NEAR(d.diagonal_sums()(0), 1.0, 1e-15);
    EXPECT_NEAR(d.diagonal_sums()(1), 1.0, 1e-15);
  }
}

TEST(Decompose, NonCovariantThrowsWithDefect) {
  try {
    decompose(hadamard_gate(), kQubit);
    FAIL() << "expected NotCovariant";
  } catch (const NotCovariant& e) {
    EXPECT_NEAR(e.defect(), 0.5, 1e-15);
  }
}

TEST(Decompose, DimensionMismatch) {
  EXPECT_THROW(decompose(Channel::identity(3), kQubit), DimensionMismatch);
}

TEST(Reconstruct, RoundTrips) {
  EXPECT_LT(choi_distance(reconstruct(decompose(Channel::identity(2), kQubit)),
                          Channel::identity(2)),
            1e-10);
  EXPECT_LT(choi_distance(reconstruct(decompose(amplitude_damping(0.3), kQubit)),
                          amplitude_damping(0.3)),
            1e-10);
  std::mt19937_64 rng(5);
  const Spectrum sp({0.0, 0.7, 1.9, 2.3, 4.0});
  for (int rep = 0; rep < 5; ++rep) {
    const Channel g = random::covariant_channel(sp, rng);
    EXPECT_LT(choi_distance(reconstruct(decompose(g, sp)), g), 1e-10);
  }
}

TEST(Reconstruct, SingleRaisingSector) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  const SectorDecomposition d(kQubit, {{1.0, m}});
  const Channel g = reconstruct(d);
  std::mt19937_64 rng(6);
  const CMatrix rho = random::density_matrix(2, rng).matrix();
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(1, 1) = rho(0, 0);
  EXPECT_LT((covchan::apply(g, rho) - expected).norm(), 1e-15);
  EXPECT_NEAR(d.tp_defect(), 1.0, 0.0);
}

TEST(SectorDecomposition, RejectsBadMasks) {
  EXPECT_THROW(SectorDecomposition(kQubit, {{0.5, CMatrix::Ones(2, 2)}}), UnknownSector);
  EXPECT_THROW(SectorDecomposition(kQubit, {{0.0, mat2(1, 2, 2, 1)}}), MaskNotPSD);
  EXPECT_THROW(SectorDecomposition(kQubit, {{0.0, mat2(1, 0.5, 0.2, 1)}}), MaskNotPSD);
  EXPECT_THROW(SectorDecomposition(kQubit, {{1.0, CMatrix::Ones(2, 2)}}), InvalidArgument);
  EXPECT_THROW(SectorDecomposition(kQubit, {{0.0, CMatrix::Ones(2, 2)},
                                            {0.0, CMatrix::Identity(2, 2)}}),
               InvalidArgument);
}

TEST(SectorChannel, AmplitudeDampingLoweringPart) {
  const double g = 0.3;
  const SectorDecomposition d = decompose(amplitude_damping(g), kQubit);
  const Channel lower = sector_channel(d, -1.0);
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = g;
  EXPECT_LT((covchan::apply(lower, basis_state(2, 1).matrix()) - expected).norm(), 1e-15);
  EXPECT_LT(covchan::apply(lower, basis_state(2, 0).matrix()).norm(), 1e-15);
  EXPECT_LT(choi_distance(sector_channel(decompose(Channel::identity(2), kQubit), 0.0),
                          Channel::identity(2)),
            1e-15);
  EXPECT_THROW(sector_channel(d, 1.0), UnknownSector);
}

TEST(ShiftDistribution, Examples) {
  std::mt19937_64 rng(7);
  const auto id = shift_distribution(decompose(Channel::identity(2), kQubit),
                                     random::density_matrix(2, rng));
  ASSERT_EQ(id.pairs.size(), 1u);
  EXPECT_NEAR(id.probability(0.0), 1.0, 1e-15);

  const SectorDecomposition ad = decompose(amplitude_damping(0.5), kQubit);
  const auto excited = shift_distribution(ad, basis_state(2, 1));
  EXPECT_NEAR(excited.probability(0.0), 0.5, 1e-15);
  EXPECT_NEAR(excited.probability(-1.0), 0.5, 1e-15);
  const auto ground = shift_distribution(ad, basis_state(2, 0));
  EXPECT_NEAR(ground.probability(0.0), 1.0, 1e-15);
  EXPECT_NEAR(ground.probability(-1.0), 0.0, 1e-15);
}

TEST(ShiftDistribution, SumsToOneForTpChannels) {
  std::mt19937_64 rng(8);
  const Spectrum sp = Spectrum::integer_ladder(5);
  const Channel g = random::covariant_channel(sp, rng);
  const auto dist = shift_distribution(decompose(g, sp), random::density_matrix(5, rng));
  EXPECT_NEAR(dist.total(), 1.0, 1e-10);
}

TEST(CharacteristicFunction, Examples) {
  std::mt19937_64 rng(9);
  const CMatrix eye = CMatrix::Identity(2, 2);
  const DensityMatrix rho = random::density_matrix(2, rng);
  EXPECT_NEAR(std::abs(characteristic_function(amplitude_damping(0.3), kQubit, eye, rho, 0.0) - 1.0),
              0.0, 1e-15);
  for (double t : {0.3, 1.0, 2.5}) {
    const Complex f = characteristic_function(amplitude_damping(0.5), kQubit, eye,
                                              basis_state(2, 1), t);
    EXPECT_LT(std::abs(f - (0.5 + 0.5 * std::polar(1.0, -t))), 1e-15);
    EXPECT_LT(std::abs(characteristic_function(Channel::identity(2), kQubit, eye, rho, t) - 1.0),
              1e-15);
  }
}

TEST(CharacteristicFunction, MatchesSectorExpansion) {
  std::mt19937_64 rng(10);
  const Spectrum sp({0.0, 0.5, 1.7, 2.0});
  const Channel g = random::covariant_channel(sp, rng);
  const SectorDecomposition d = decompose(g, sp);
  const CMatrix k = random::psd(4, rng);
  const DensityMatrix rho = random::density_matrix(4, rng);
  for (double t : {-1.3, 0.0, 0.4, 3.3})
    EXPECT_LT(std::abs(characteristic_function(g, sp, k, rho, t) -
                       characteristic_from_sectors(d, k, rho, t)),
              1e-12);
}

TEST(BochnerCheck, Examples) {
  const CMatrix eye = CMatrix::Identity(2, 2);
  const std::vector<double> one{0.4};
  std::mt19937_64 rng(11);
  const DensityMatrix rho = random::density_matrix(2, rng);
  const double f0 = covchan::apply(amplitude_damping(0.3), rho.matrix()).trace().real();
  EXPECT_NEAR(bochner_check(amplitude_damping(0.3), kQubit, eye, rho, one), f0, 1e-15);
  const std::vector<double> times{0.0, kPi, 2 * kPi};
  EXPECT_GE(bochner_check(amplitude_damping(0.5), kQubit, eye, basis_state(2, 1), times),
            -1e-10);
  EXPECT_THROW(bochner_check(amplitude_damping(0.5), kQubit, mat2(1, 0, 0, -1),
                             basis_state(2, 1), times),
               InvalidArgument);
}

TEST(BochnerCheck, RandomCovariantChannels) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> time(-4.0, 4.0);
  const Spectrum sp({0.0, 1.0, 1.5, 3.0});
  for (int rep = 0; rep < 10; ++rep) {
    const Channel g = random::covariant_channel(sp, rng);
    std::vector<double> times(5);
    for (double& t : times) t = time(rng);
    EXPECT_GE(bochner_check(g, sp, random::psd(4, rng), random::density_matrix(4, rng), times),
              -1e-9);
  }
}

TEST(DomainExtension, Examples) {
  const SectorDecomposition ad = decompose(amplitude_damping(0.4), kQubit);
  const DensityMatrix plus(CMatrix::Constant(2, 2, 0.5));
  EXPECT_EQ(domain_extension_check(ad, plus, 0.0), 0.0);
  EXPECT_LT(domain_extension_check(ad, plus, 1.0), 1e-10);
  std::mt19937_64 rng(13);
  const Spectrum sp({0.0, 0.8, 2.2});
  const SectorDecomposition d = decompose(random::covariant_channel(sp, rng), sp);
  EXPECT_LT(domain_extension_check(d, random::density_matrix(3, rng), 2.1), 1e-9);
}

}  // namespace
}  // namespace covchan
