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

// Time-covariant channels for a non-degenerate diagonal Hamiltonian.
//
// A channel G commutes with e^{-iHt} . e^{iHt} exactly when its Choi matrix
// has no weight between index pairs (j',j), (k',k) with different energy
// transfer w_j' - w_j != w_k' - w_k. Each energy transfer sigma then
// contributes S_sigma (M_sigma * rho) S_sigma^dagger, with S_sigma a 0/1
// partial shift and M_sigma a positive mask read straight off the Choi
// entries:
//
//   M_sigma(j, k) = <j + sigma| G(|j><k|) |k + sigma>.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "covchan/matcore.hpp"
#include "covchan/spectrum.hpp"

namespace covchan {

struct Sector {
  PartialShift shift;
  CMatrix mask;  // n x n, exact zeros outside domain x domain

  double sigma() const noexcept { return shift.sigma; }

  /// Principal submatrix of the mask on the shift's domain.
  CMatrix domain_mask() const {
    const auto m = static_cast<Index>(shift.domain.size());
    CMatrix sub(m, m);
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < m; ++b)
        sub(a, b) = mask(shift.domain[static_cast<std::size_t>(a)],
                         shift.domain[static_cast<std::size_t>(b)]);
    return sub;
  }
};

/// Canonical family {sigma -> (S_sigma, M_sigma)} on a fixed spectrum,
/// sorted by ascending sigma.
class SectorDecomposition {
 public:
  /// Validates and normalizes (sigma, mask) pairs: each sigma must be an
  /// energy difference with a non-empty shift, masks are Hermitian and PSD on
  /// the shift domain, and entries off the domain are zeroed (they must be
  /// negligible).
  SectorDecomposition(Spectrum spectrum,
                      std::vector<std::pair<double, CMatrix>> masks,
                      double tol = tolerance::kPsd,
                      double projection_distance = 0.0)
      : spectrum_(std::move(spectrum)),
        projection_distance_(projection_distance) {
    const Index n = spectrum_.size();
    std::sort(masks.begin(), masks.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [sigma, mask] : masks) {
      if (mask.rows() != n || mask.cols() != n)
        throw DimensionMismatch("mask for sigma " + std::to_string(sigma) +
                                " is " + shape_string(mask));
      if (!all_finite(mask)) throw InvalidArgument("non-finite mask entry");
      if (!sectors_.empty() && spectrum_.same(sectors_.back().sigma(), sigma))
        throw InvalidArgument("duplicate sector " + std::to_string(sigma));
      Sector sector{partial_shift(spectrum_, sigma), std::move(mask)};
      if (sector.shift.empty())
        throw UnknownSector("sigma " + std::to_string(sigma) +
                            " is not an energy difference of the spectrum");
      std::vector<bool> in_domain(static_cast<std::size_t>(n), false);
      for (Index j : sector.shift.domain) in_domain[static_cast<std::size_t>(j)] = true;
      for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < n; ++c)
          if (!in_domain[static_cast<std::size_t>(r)] || !in_domain[static_cast<std::size_t>(c)]) {
            if (std::abs(sector.mask(r, c)) > tol)
              throw InvalidArgument("mask for sigma " + std::to_string(sigma) +
                                    " has weight outside its domain");
            sector.mask(r, c) = 0.0;
          }
      if (hermiticity_defect(sector.mask) > tol)
        throw MaskNotPSD("mask for sigma " + std::to_string(sigma) +
                         " is not Hermitian");
      const double lmin = min_eigenvalue(sector.domain_mask());
      if (lmin < -tol)
        throw MaskNotPSD("mask for sigma " + std::to_string(sigma) +
                         " has eigenvalue " + std::to_string(lmin));
      sectors_.push_back(std::move(sector));
    }
  }

  const Spectrum& spectrum() const noexcept { return spectrum_; }
  const std::vector<Sector>& sectors() const noexcept { return sectors_; }
  Index dim() const noexcept { return spectrum_.size(); }

  /// Choi Frobenius distance removed by sector projection in decompose (0 for
  /// exactly covariant inputs).
  double projection_distance() const noexcept { return projection_distance_; }

  const Sector* find(double sigma) const {
    for (const Sector& s : sectors_)
      if (spectrum_.same(s.sigma(), sigma)) return &s;
    return nullptr;
  }

  const Sector& at(double sigma) const {
    if (const Sector* s = find(sigma)) return *s;
    throw UnknownSector("no sector with sigma " + std::to_string(sigma));
  }

  /// sum_sigma M_sigma(w, w) for every level w. All ones iff the channel is
  /// trace preserving.
  RVector diagonal_sums() const {
    RVector sums = RVector::Zero(dim());
    for (const Sector& s : sectors_) sums += s.mask.diagonal().real();
    return sums;
  }

  double tp_defect() const {
    return (diagonal_sums() - RVector::Ones(dim())).cwiseAbs().maxCoeff();
  }

 private:
  Spectrum spectrum_;
  std::vector<Sector> sectors_;
  double projection_distance_ = 0.0;
};

namespace detail {

inline void require_square(const Channel& channel, const Spectrum& spectrum) {
  if (!channel.is_square() || channel.dim_in() != spectrum.size())
    throw DimensionMismatch("channel is " + std::to_string(channel.dim_in()) +
                            "->" + std::to_string(channel.dim_out()) +
                            ", spectrum has " + std::to_string(spectrum.size()) +
                            " levels");
}

// Cluster id (index into energy_differences) of w_out - w_in, per Choi index.
inline std::vector<int> choi_sector_labels(const Spectrum& spectrum) {
  const std::vector<double> diffs = energy_differences(spectrum);
  const Index n = spectrum.size();
  std::vector<int> labels(static_cast<std::size_t>(n * n));
  for (Index out = 0; out < n; ++out)
    for (Index in = 0; in < n; ++in) {
      const double d = spectrum[out] - spectrum[in];
      auto it = std::min_element(diffs.begin(), diffs.end(),
                                 [d](double a, double b) {
                                   return std::abs(a - d) < std::abs(b - d);
                                 });
      labels[static_cast<std::size_t>(out * n + in)] =
          static_cast<int>(it - diffs.begin());
    }
  return labels;
}

struct CrossSectorWeight {
  double max_abs = 0.0;
  double frobenius = 0.0;
};

inline CrossSectorWeight cross_sector_weight(const CMatrix& choi,
                                             const Spectrum& spectrum) {
  const std::vector<int> labels = choi_sector_labels(spectrum);
  CrossSectorWeight w;
  double sq = 0.0;
  for (Index r = 0; r < choi.rows(); ++r)
    for (Index col = 0; col < choi.cols(); ++col)
      if (labels[static_cast<std::size_t>(r)] != labels[static_cast<std::size_t>(col)]) {
        w.max_abs = std::max(w.max_abs, std::abs(choi(r, col)));
        sq += std::norm(choi(r, col));
      }
  w.frobenius = std::sqrt(sq);
  return w;
}

}  // namespace detail

/// Largest Choi entry connecting different energy-transfer sectors. Zero iff
/// the channel commutes with the time evolution: conjugating G by the
/// evolution multiplies that entry by e^{i(sigma - sigma')t}.
inline double covariance_defect(const Channel& channel,
                                const Spectrum& spectrum) {
  detail::require_square(channel, spectrum);
  return detail::cross_sector_weight(choi_of(channel).matrix(), spectrum).max_abs;
}

struct ProjectedChannel {
  Channel channel;
  double distance;  // Choi Frobenius distance to the input
};

/// Nearest covariant map in the Choi pinching sense: cross-sector Choi
/// entries are zeroed. With `renormalize`, input levels are rescaled so the
/// result is trace preserving (the pinching itself leaves the partial trace
/// unchanged, so this only matters for non-TP inputs).
inline ProjectedChannel project_covariant(const Channel& channel,
                                          const Spectrum& spectrum,
                                          bool renormalize = false) {
  detail::require_square(channel, spectrum);
  const Index n = spectrum.size();
  const CMatrix original = choi_of(channel).matrix();
  CMatrix c = original;
  const std::vector<int> labels = detail::choi_sector_labels(spectrum);
  for (Index r = 0; r < c.rows(); ++r)
    for (Index col = 0; col < c.cols(); ++col)
      if (labels[static_cast<std::size_t>(r)] != labels[static_cast<std::size_t>(col)])
        c(r, col) = 0.0;
  const double distance = (c - original).norm();
  if (renormalize) {
    RVector scale = RVector::Ones(n);
    for (Index j = 0; j < n; ++j) {
      double tr = 0.0;
      for (Index out = 0; out < n; ++out) tr += c(out * n + j, out * n + j).real();
      if (tr > 0.0) scale(j) = 1.0 / std::sqrt(tr);
    }
    for (Index r = 0; r < c.rows(); ++r)
      for (Index col = 0; col < c.cols(); ++col)
        c(r, col) *= scale(r % n) * scale(col % n);
  }
  return {kraus_from_choi(ChoiMatrix(n, n, std::move(c))), distance};
}

/// Canonical decomposition G(rho) = sum_sigma S_sigma (M_sigma * rho)
/// S_sigma^dagger. Channels whose covariance defect is at most `tol` are
/// sector-projected first; the removed Choi weight is reported as
/// projection_distance.
inline SectorDecomposition decompose(const Channel& channel,
                                     const Spectrum& spectrum,
                                     double tol = 1e-12) {
  detail::require_square(channel, spectrum);
  const Index n = spectrum.size();
  const ChoiMatrix choi = choi_of(channel);
  const detail::CrossSectorWeight cross =
      detail::cross_sector_weight(choi.matrix(), spectrum);
  if (cross.max_abs > tol) throw NotCovariant(cross.max_abs, tol);

  const double psd_tol = std::max(tol, tolerance::kPsd);

  std::vector<std::pair<double, CMatrix>> masks;
  for (double sigma : energy_differences(spectrum)) {
    const PartialShift shift = partial_shift(spectrum, sigma);
    if (shift.empty()) continue;
    CMatrix mask = CMatrix::Zero(n, n);
    for (std::size_t a = 0; a < shift.domain.size(); ++a)
      for (std::size_t b = 0; b < shift.domain.size(); ++b)
        mask(shift.domain[a], shift.domain[b]) =
            choi(shift.target[a], shift.domain[a], shift.target[b],
                 shift.domain[b]);
    if (mask.cwiseAbs().maxCoeff() < 1e-15) continue;
    const Sector probe{shift, mask};
    const double lmin = min_eigenvalue(probe.domain_mask());
    if (lmin < -psd_tol)
      throw NotCP("mask for sigma " + std::to_string(sigma) +
                  " has eigenvalue " + std::to_string(lmin));
    masks.emplace_back(sigma, std::move(mask));
  }
  return SectorDecomposition(spectrum, std::move(masks), psd_tol,
                             cross.frobenius);
}

namespace detail {

inline void append_sector_kraus(const Sector& sector, Index n,
                                std::vector<CMatrix>& kraus) {
  const CMatrix sub = sector.domain_mask();
  const std::vector<EigenPair> pairs = canonical_eigenpairs(sub);
  const double lmax = pairs.empty() ? 0.0 : pairs.front().value;
  const double cutoff =
      1e-14 * static_cast<double>(sub.rows()) * std::max(lmax, 0.0);
  for (const EigenPair& p : pairs) {
    if (p.value < -tolerance::kPsd)
      throw MaskNotPSD("mask for sigma " + std::to_string(sector.sigma()) +
                       " has eigenvalue " + std::to_string(p.value));
    if (p.value <= cutoff) break;
    CVector d = CVector::Zero(n);
    const double w = std::sqrt(p.value);
    for (std::size_t a = 0; a < sector.shift.domain.size(); ++a)
      d(sector.shift.domain[a]) = w * p.vector(static_cast<Index>(a));
    kraus.push_back(sector.shift.matrix * d.asDiagonal());
  }
}

inline Channel channel_from_kraus(Index n, std::vector<CMatrix> kraus) {
  if (kraus.empty()) kraus.push_back(CMatrix::Zero(n, n));
  return Channel(n, n, std::move(kraus));
}

}  // namespace detail

/// Kraus family S_sigma diag(d) with M_sigma = sum |d><d| per sector.
inline Channel reconstruct(const SectorDecomposition& decomp) {
  std::vector<CMatrix> kraus;
  for (const Sector& s : decomp.sectors())
    detail::append_sector_kraus(s, decomp.dim(), kraus);
  return detail::channel_from_kraus(decomp.dim(), std::move(kraus));
}

/// The CP (possibly trace-decreasing) component rho -> S (M * rho) S^dagger.
inline Channel sector_channel(const SectorDecomposition& decomp, double sigma) {
  std::vector<CMatrix> kraus;
  detail::append_sector_kraus(decomp.at(sigma), decomp.dim(), kraus);
  return detail::channel_from_kraus(decomp.dim(), std::move(kraus));
}

/// S (M * X) S^dagger for an arbitrary (possibly non-Hermitian) operator X.
inline CMatrix apply_sector(const Sector& sector, const CMatrix& op) {
  return sector.shift.matrix * hadamard_product(sector.mask, op) *
         sector.shift.matrix.adjoint();
}

struct EnergyShiftDistribution {
  std::vector<std::pair<double, double>> pairs;  // (sigma, p), ascending sigma

  double total() const {
    double s = 0.0;
    for (const auto& [sigma, p] : pairs) s += p;
    return s;
  }

  /// p(sigma), 0 when sigma is absent.
  double probability(double sigma, double match_tol = 1e-9) const {
    for (const auto& [s, p] : pairs)
      if (std::abs(s - sigma) <= match_tol) return p;
    return 0.0;
  }
};

/// p(sigma) = tr(G_sigma(rho)), clipped to [0, 1].
inline EnergyShiftDistribution shift_distribution(
    const SectorDecomposition& decomp, const DensityMatrix& rho) {
  if (rho.dim() != decomp.dim())
    throw DimensionMismatch("state has dim " + std::to_string(rho.dim()) +
                            ", decomposition has " + std::to_string(decomp.dim()));
  EnergyShiftDistribution dist;
  for (const Sector& s : decomp.sectors()) {
    const double p = s.mask.diagonal().cwiseProduct(rho.matrix().diagonal()).sum().real();
    if (p < -tolerance::kPsd)
      throw NotCP("negative shift probability " + std::to_string(p));
    dist.pairs.emplace_back(s.sigma(), std::clamp(p, 0.0, 1.0));
  }
  return dist;
}

/// f_{K,rho}(t) = tr(K G(rho e^{-iHt}) e^{iHt}).
inline Complex characteristic_function(const Channel& channel,
                                       const Spectrum& spectrum,
                                       const CMatrix& observable,
                                       const DensityMatrix& rho, double t) {
  detail::require_square(channel, spectrum);
  if (rho.dim() != spectrum.size() || observable.rows() != spectrum.size() ||
      observable.cols() != spectrum.size())
    throw DimensionMismatch("observable/state do not match the spectrum");
  const CVector d = spectrum.phases(t);
  const CMatrix out = covchan::apply(channel, rho.matrix() * d.asDiagonal());
  return (observable * out * d.conjugate().asDiagonal()).trace();
}

/// Same function evaluated from the sector decomposition:
/// sum_sigma tr(K G_sigma(rho)) e^{i sigma t}.
inline Complex characteristic_from_sectors(const SectorDecomposition& decomp,
                                           const CMatrix& observable,
                                           const DensityMatrix& rho,
                                           double t) {
  Complex f = 0.0;
  for (const Sector& s : decomp.sectors())
    f += (observable * apply_sector(s, rho.matrix())).trace() *
         std::polar(1.0, s.sigma() * t);
  return f;
}

/// Minimum eigenvalue of F[k,l] = f_{K,rho}(t_k - t_l); non-negative for
/// covariant CP maps and PSD K.
inline double bochner_check(const Channel& channel, const Spectrum& spectrum,
                            const CMatrix& observable, const DensityMatrix& rho,
                            std::span<const double> times) {
  if (hermiticity_defect(observable) > tolerance::kHermitian ||
      min_eigenvalue(observable) < -tolerance::kPsd)
    throw InvalidArgument("observable K must be positive semidefinite");
  const auto m = static_cast<Index>(times.size());
  if (m == 0) return 0.0;
  CMatrix f(m, m);
  for (Index k = 0; k < m; ++k)
    for (Index l = 0; l < m; ++l)
      f(k, l) = characteristic_function(channel, spectrum, observable, rho,
                                        times[static_cast<std::size_t>(k)] -
                                            times[static_cast<std::size_t>(l)]);
  return min_eigenvalue(f);
}

/// max_sigma || G_sigma(rho e^{-iHt}) - G_sigma(rho) e^{-iHt} e^{i sigma t} ||_F,
/// with the left side from applying the sector map to the non-Hermitian
/// operator directly.
inline double domain_extension_check(const SectorDecomposition& decomp,
                                     const DensityMatrix& rho, double t) {
  if (rho.dim() != decomp.dim())
    throw DimensionMismatch("state does not match decomposition");
  const CVector d = decomp.spectrum().phases(t);
  const CMatrix shifted = rho.matrix() * d.asDiagonal();
  double worst = 0.0;
  for (const Sector& s : decomp.sectors()) {
    const CMatrix lhs = apply_sector(s, shifted);
    const CMatrix rhs = apply_sector(s, rho.matrix()) * d.asDiagonal() *
                        std::polar(1.0, s.sigma() * t);
    worst = std::max(worst, (lhs - rhs).norm());
  }
  return worst;
}

}  // namespace covchan
