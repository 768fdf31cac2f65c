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

// Random test objects: Ginibre matrices, Haar unitaries, CPTP and covariant
// channels, states and masks.

#pragma once

#include <random>

#include "covchan/covariant.hpp"
#include "covchan/matcore.hpp"

namespace covchan::random {

template <class Rng>
CMatrix ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      m(r, c) = Complex(re, normal(rng));
    }
  return m;
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
template <class Rng>
CMatrix unitary(Index n, Rng& rng) {
  const CMatrix g = ginibre(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

template <class Rng>
CVector unit_vector(Index n, Rng& rng) {
  CVector v = ginibre(n, 1, rng).col(0);
  return v / v.norm();
}

/// Full-rank density matrix G G^dagger / tr.
template <class Rng>
DensityMatrix density_matrix(Index n, Rng& rng) {
  const CMatrix g = ginibre(n, n, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()).eval());
}

template <class Rng>
CMatrix psd(Index n, Rng& rng, Index rank = -1) {
  const CMatrix g = ginibre(n, rank < 0 ? n : rank, rng);
  return g * g.adjoint();
}

/// PSD mask with unit diagonal: Gram matrix of random unit vectors.
template <class Rng>
CMatrix unit_diagonal_mask(Index n, Rng& rng, Index rank = -1) {
  CMatrix g = ginibre(rank < 0 ? n : rank, n, rng);
  for (Index c = 0; c < n; ++c) g.col(c) /= g.col(c).norm();
  CMatrix m = g.adjoint() * g;
  for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

/// CPTP channel with `kraus_count` Kraus operators: a random isometry
/// V: C^n -> C^{kn} cut into blocks.
template <class Rng>
Channel cptp_channel(Index n, Index kraus_count, Rng& rng) {
  const CMatrix stacked = ginibre(n * kraus_count, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(stacked);
  const CMatrix isometry =
      qr.householderQ() * CMatrix::Identity(n * kraus_count, n);
  std::vector<CMatrix> kraus;
  for (Index k = 0; k < kraus_count; ++k)
    kraus.push_back(isometry.block(k * n, 0, n, n));
  return Channel(n, n, std::move(kraus));
}

/// Covariant CPTP channel: a random CPTP channel with its Choi matrix
/// sector-projected and renormalized.
template <class Rng>
Channel covariant_channel(const Spectrum& spectrum, Rng& rng,
                          Index kraus_count = -1) {
  const Index n = spectrum.size();
  const Channel g = cptp_channel(n, kraus_count < 0 ? n : kraus_count, rng);
  return project_covariant(g, spectrum, /*renormalize=*/true).channel;
}

}  // namespace covchan::random
