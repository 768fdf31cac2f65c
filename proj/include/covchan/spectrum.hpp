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

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "covchan/matcore.hpp"

namespace covchan {

/// Non-degenerate spectrum of a diagonal Hamiltonian H = diag(w_1, ..., w_n)
/// with w_1 < ... < w_n. Energies closer than match_tol are considered
/// equal, so consecutive gaps must exceed it.
class Spectrum {
 public:
  explicit Spectrum(std::vector<double> energies,
                    std::optional<double> match_tol = std::nullopt)
      : energies_(std::move(energies)) {
    if (energies_.empty()) throw InvalidArgument("spectrum is empty");
    double peak = 0.0;
    for (double w : energies_) {
      if (!std::isfinite(w)) throw InvalidArgument("non-finite energy");
      peak = std::max(peak, std::abs(w));
    }
    match_tol_ = match_tol.value_or(1e-9 * peak);
    if (!(match_tol_ >= 0.0) || !std::isfinite(match_tol_))
      throw InvalidArgument("match_tol must be finite and non-negative");
    for (std::size_t i = 1; i < energies_.size(); ++i) {
      const double gap = energies_[i] - energies_[i - 1];
      if (gap < 0.0)
        throw InvalidArgument("energies must be listed in increasing order");
      if (gap <= match_tol_)
        throw DegenerateSpectrum("levels " + std::to_string(i - 1) + " and " +
                                 std::to_string(i) + " are closer than " +
                                 std::to_string(match_tol_));
    }
  }

  /// Equally spaced levels 0, 1, ..., n-1.
  static Spectrum integer_ladder(Index n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] = static_cast<double>(i);
    return Spectrum(std::move(w));
  }

  Index size() const noexcept { return static_cast<Index>(energies_.size()); }
  double operator[](Index i) const { return energies_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& energies() const noexcept { return energies_; }
  double match_tol() const noexcept { return match_tol_; }

  bool same(double a, double b) const noexcept {
    return std::abs(a - b) <= match_tol_;
  }

  /// Index of the level equal to `energy` within match_tol, if any.
  std::optional<Index> index_of(double energy) const {
    auto it = std::lower_bound(energies_.begin(), energies_.end(),
                               energy - match_tol_);
    if (it != energies_.end() && std::abs(*it - energy) <= match_tol_)
      return static_cast<Index>(it - energies_.begin());
    return std::nullopt;
  }

  /// Diagonal of e^{-iHt}.
  CVector phases(double t) const {
    CVector d(size());
    for (Index i = 0; i < size(); ++i)
      d(i) = std::polar(1.0, -energies_[static_cast<std::size_t>(i)] * t);
    return d;
  }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<double> energies_;
  double match_tol_ = 0.0;
};

/// Sorted distinct values w_j - w_k, clustered with the spectrum's
/// match_tol. Always contains 0.
inline std::vector<double> energy_differences(const Spectrum& spectrum) {
  std::vector<double> diffs;
  const Index n = spectrum.size();
  diffs.reserve(static_cast<std::size_t>(n * n));
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k)
      diffs.push_back(j == k ? 0.0 : spectrum[j] - spectrum[k]);
  std::sort(diffs.begin(), diffs.end());
  std::vector<double> out;
  for (double d : diffs) {
    if (out.empty() || d - out.back() > spectrum.match_tol())
      out.push_back(d);
  }
  // Snap the zero cluster to exactly 0.
  for (double& d : out)
    if (std::abs(d) <= spectrum.match_tol()) d = 0.0;
  return out;
}

/// 0/1 partial permutation S_sigma = sum_{j in domain} |idx(w_j + sigma)><j|.
struct PartialShift {
  double sigma = 0.0;
  CMatrix matrix;
  std::vector<Index> domain;  // input levels j with w_j + sigma in the spectrum
  std::vector<Index> target;  // target[i] is the image level of domain[i]

  bool empty() const noexcept { return domain.empty(); }
};

inline PartialShift partial_shift(const Spectrum& spectrum, double sigma) {
  PartialShift s;
  s.sigma = sigma;
  const Index n = spectrum.size();
  s.matrix = CMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    if (auto t = spectrum.index_of(spectrum[j] + sigma)) {
      s.matrix(*t, j) = 1.0;
      s.domain.push_back(j);
      s.target.push_back(*t);
    }
  }
  return s;
}

/// Conjugation by e^{-iHt}: returns e^{-iHt} X e^{iHt}.
inline CMatrix evolve(const Spectrum& spectrum, double t, const CMatrix& op) {
  if (op.rows() != spectrum.size() || op.cols() != spectrum.size())
    throw DimensionMismatch("operator is " + shape_string(op) +
                            ", spectrum has " + std::to_string(spectrum.size()) +
                            " levels");
  const CVector d = spectrum.phases(t);
  return d.asDiagonal() * op * d.conjugate().asDiagonal();
}

inline DensityMatrix evolve(const Spectrum& spectrum, double t,
                            const DensityMatrix& rho) {
  return DensityMatrix(evolve(spectrum, t, rho.matrix()));
}

}  // namespace covchan
