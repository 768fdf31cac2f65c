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

// Reliable timing and the circulant Hadamard channel it induces.
//
// If the outputs of phi_0, phi_s, ..., phi_{(N-1)s} (phi_t = e^{-iHt} phi_0)
// are mutually orthogonal, restricting G to their span gives the Hadamard
// channel with circulant mask V_jk = v(j - k mod N), where
//
//   v(j) = tr(U_sj P G(|phi_0><phi_sj|)),   U_t = e^{-iHt},
//
// and P is the support projector of G(|phi_0><phi_0|). For covariant G,
// v(j) = sum_sigma p(sigma) e^{-i sigma s j}. The eigenvalues of V/N are
// q_k = (1/N) sum_j v(j) e^{-2 pi i jk/N}, giving the capacity lower bound
// log2 N - S(q).

#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "covchan/capacity.hpp"
#include "covchan/covariant.hpp"
#include "covchan/matcore.hpp"
#include "covchan/spectrum.hpp"

namespace covchan {

struct TimingChannelReport {
  Index N = 0;
  double s = 0.0;
  std::vector<Complex> v;
  std::vector<double> q;
  double bound = 0.0;
  double orthogonality_defect = 0.0;
};

namespace detail {

inline void require_unit_vector(const CVector& phi0, Index n) {
  if (phi0.size() != n)
    throw DimensionMismatch("phi0 has length " + std::to_string(phi0.size()) +
                            ", expected " + std::to_string(n));
  if (std::abs(phi0.norm() - 1.0) > tolerance::kTrace)
    throw InvalidArgument("phi0 is not normalized (norm " +
                          std::to_string(phi0.norm()) + ")");
}

}  // namespace detail

/// tr(G(rho) G(rho_s)) for rho = |phi0><phi0|, rho_s = e^{-iHs} rho e^{iHs}.
/// Zero iff the two outputs are orthogonal.
inline double timing_orthogonality_defect(const Channel& channel,
                                          const Spectrum& spectrum,
                                          const CVector& phi0, double s) {
  detail::require_square(channel, spectrum);
  detail::require_unit_vector(phi0, spectrum.size());
  const CMatrix rho = phi0 * phi0.adjoint();
  const CMatrix a = covchan::apply(channel, rho);
  const CMatrix b = covchan::apply(channel, evolve(spectrum, s, rho));
  return std::max(0.0, (a * b).trace().real());
}

inline bool is_reliable_timing(const Channel& channel, const Spectrum& spectrum,
                               const CVector& phi0, double s, double tol) {
  return timing_orthogonality_defect(channel, spectrum, phi0, s) <= tol;
}

struct ShiftMixture {
  Channel channel;
  /// Levels on which every shift with p > 0 acts isometrically; the channel
  /// is trace preserving exactly on their span.
  std::vector<Index> tp_support;
  bool trace_preserving = false;
};

/// rho -> sum_j p_j S_{sigma_j} rho S_{sigma_j}^dagger.
inline ShiftMixture build_shift_mixture(
    const Spectrum& spectrum,
    const std::vector<std::pair<double, double>>& shifts) {
  if (shifts.empty()) throw InvalidArgument("no shifts given");
  const Index n = spectrum.size();
  double total = 0.0;
  std::vector<CMatrix> kraus;
  std::vector<bool> isometric(static_cast<std::size_t>(n), true);
  for (const auto& [sigma, p] : shifts) {
    if (!(p >= 0.0)) throw InvalidArgument("negative shift probability");
    total += p;
    const PartialShift shift = partial_shift(spectrum, sigma);
    if (shift.empty())
      throw UnknownSector("sigma " + std::to_string(sigma) +
                          " is not an energy difference of the spectrum");
    kraus.push_back(std::sqrt(p) * shift.matrix);
    if (p == 0.0) continue;
    std::vector<bool> in_domain(static_cast<std::size_t>(n), false);
    for (Index j : shift.domain) in_domain[static_cast<std::size_t>(j)] = true;
    for (Index j = 0; j < n; ++j)
      if (!in_domain[static_cast<std::size_t>(j)]) isometric[static_cast<std::size_t>(j)] = false;
  }
  if (std::abs(total - 1.0) > tolerance::kTrace)
    throw InvalidArgument("shift probabilities sum to " + std::to_string(total));
  ShiftMixture out{Channel(n, n, std::move(kraus)), {}, false};
  for (Index j = 0; j < n; ++j)
    if (isometric[static_cast<std::size_t>(j)]) out.tp_support.push_back(j);
  out.trace_preserving = static_cast<Index>(out.tp_support.size()) == n;
  return out;
}

/// Circulant V_jk = v((j - k) mod N).
inline CMatrix circulant(const std::vector<Complex>& v) {
  const auto n = static_cast<Index>(v.size());
  CMatrix c(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < n; ++k)
      c(j, k) = v[static_cast<std::size_t>(((j - k) % n + n) % n)];
  return c;
}

/// q, bound from a coherence vector v (v[0] = 1).
inline TimingChannelReport timing_report_from_coherence(
    std::vector<Complex> v, double s, double orthogonality_defect = 0.0) {
  const auto n = static_cast<Index>(v.size());
  if (n == 0) throw InvalidArgument("empty coherence vector");
  TimingChannelReport r;
  r.N = n;
  r.s = s;
  r.orthogonality_defect = orthogonality_defect;
  r.q.resize(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (Index j = 0; j < n; ++j)
      acc += v[static_cast<std::size_t>(j)] *
             std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j * k) /
                                 static_cast<double>(n));
    const double qk = acc.real() / static_cast<double>(n);
    if (qk < -tolerance::kPsd)
      throw InvalidArgument("circulant coherence matrix has eigenvalue " +
                            std::to_string(qk));
    r.q[static_cast<std::size_t>(k)] = std::max(qk, 0.0);
  }
  r.v = std::move(v);
  r.bound = std::log2(static_cast<double>(n)) - shannon_entropy(r.q);
  return r;
}

/// v(j) = sum_sigma p(sigma) e^{-i sigma s j}, j = 0..N-1.
inline std::vector<Complex> v_from_distribution(
    const EnergyShiftDistribution& dist, double s, Index n) {
  std::vector<Complex> v(static_cast<std::size_t>(n), Complex(0.0));
  for (Index j = 0; j < n; ++j)
    for (const auto& [sigma, p] : dist.pairs)
      v[static_cast<std::size_t>(j)] +=
          p * std::polar(1.0, -sigma * s * static_cast<double>(j));
  return v;
}

/// True when e^{-iH sN} is a global phase, i.e. all w_j sN agree mod 2 pi.
inline bool is_periodic(const Spectrum& spectrum, double period,
                        double phase_tol = 1e-9) {
  for (Index j = 1; j < spectrum.size(); ++j) {
    const double theta = (spectrum[j] - spectrum[0]) * period;
    if (std::abs(std::remainder(theta, 2.0 * std::numbers::pi)) > phase_tol)
      return false;
  }
  return true;
}

/// Restricted circulant channel of a covariant channel with reliable timing
/// at step s over N steps. `tol` bounds the pairwise output overlaps.
inline TimingChannelReport timing_channel(const Channel& channel,
                                          const Spectrum& spectrum,
                                          const CVector& phi0, double s,
                                          Index n_steps, double tol) {
  detail::require_square(channel, spectrum);
  detail::require_unit_vector(phi0, spectrum.size());
  if (n_steps < 1) throw InvalidArgument("N must be positive");
  if (!is_periodic(spectrum, s * static_cast<double>(n_steps)))
    throw NotPeriodic("e^{-iHsN} is not a global phase for s=" +
                      std::to_string(s) + ", N=" + std::to_string(n_steps));

  std::vector<CVector> orbit;
  std::vector<CMatrix> outputs;
  for (Index j = 0; j < n_steps; ++j) {
    orbit.push_back(spectrum.phases(s * static_cast<double>(j)).cwiseProduct(phi0));
    outputs.push_back(covchan::apply(channel, CMatrix(orbit.back() * orbit.back().adjoint())));
  }
  double defect = 0.0;
  for (Index j = 0; j < n_steps; ++j)
    for (Index k = j + 1; k < n_steps; ++k)
      defect = std::max(defect,
                        (outputs[static_cast<std::size_t>(j)] *
                         outputs[static_cast<std::size_t>(k)]).trace().real());
  if (defect > tol) throw NotReliableTiming(defect, tol);

  // Support projector of G(|phi0><phi0|), relative cutoff.
  const HermitianEigen eig = hermitian_eigen(outputs.front());
  const double cutoff = tolerance::kPsd * std::max(eig.values.maxCoeff(), 0.0);
  CMatrix projector = CMatrix::Zero(spectrum.size(), spectrum.size());
  for (Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > cutoff)
      projector += eig.vectors.col(i) * eig.vectors.col(i).adjoint();

  std::vector<Complex> v;
  for (Index j = 0; j < n_steps; ++j) {
    const CVector u = spectrum.phases(s * static_cast<double>(j));
    const CMatrix cross = covchan::apply(channel, CMatrix(phi0 * orbit[static_cast<std::size_t>(j)].adjoint()));
    v.push_back((u.asDiagonal() * projector * cross).trace());
  }
  return timing_report_from_coherence(std::move(v), s, std::max(defect, 0.0));
}

}  // namespace covchan
