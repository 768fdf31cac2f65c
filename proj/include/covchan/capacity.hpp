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

// Single-letter coherent information and the lower bound
// log2(n) - S(M/n) on the quantum capacity of a Hadamard channel
// rho -> M * rho with unit-diagonal positive mask M.

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "covchan/matcore.hpp"

namespace covchan {

struct CapacityReport {
  double coherent_information = 0.0;  // bits
  std::optional<double> hadamard_bound;  // bits
  Index input_dim = 0;
  std::optional<double> hqc_difference;  // |coherent_information - bound|
};

namespace detail {

// Tr over the left factor of |psi><psi| on C^n (x) C^n.
inline CMatrix right_marginal(const CVector& psi, Index n) {
  CMatrix amplitudes(n, n);  // amplitudes(a, b) = <a, b | psi>
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) amplitudes(a, b) = psi(a * n + b);
  return amplitudes.transpose() * amplitudes.conjugate();
}

}  // namespace detail

/// Purification sum_i sqrt(lambda_i) |i> (x) |e_i> of rho = sum lambda_i |e_i><e_i|,
/// reference system on the left.
inline CVector purify(const DensityMatrix& rho) {
  const HermitianEigen eig = hermitian_eigen(rho.matrix());
  const Index n = rho.dim();
  CVector psi = CVector::Zero(n * n);
  for (Index i = 0; i < n; ++i) {
    const double w = std::sqrt(std::max(eig.values(i), 0.0));
    for (Index b = 0; b < n; ++b) psi(i * n + b) = w * eig.vectors(b, i);
  }
  return psi;
}

/// S(G(rho)) - S((id (x) G)(|psi><psi|)) where rho is the right marginal of
/// the given purification.
inline double coherent_information_of_purification(const Channel& channel,
                                                   const CVector& psi) {
  if (!channel.is_square())
    throw DimensionMismatch("coherent information needs a square channel");
  const Index n = channel.dim_in();
  if (psi.size() != n * n)
    throw DimensionMismatch("purification has length " +
                            std::to_string(psi.size()) + ", expected " +
                            std::to_string(n * n));
  const DensityMatrix rho(detail::right_marginal(psi, n));
  const DensityMatrix out = covchan::apply(channel, rho);
  const DensityMatrix joint(bipartite_apply(channel, CMatrix(psi * psi.adjoint())));
  return von_neumann_entropy(out) - von_neumann_entropy(joint);
}

inline double coherent_information(const Channel& channel,
                                   const DensityMatrix& rho) {
  if (!channel.is_square() || channel.dim_in() != rho.dim())
    throw DimensionMismatch("state dim " + std::to_string(rho.dim()) +
                            " does not match channel");
  return coherent_information_of_purification(channel, purify(rho));
}

namespace detail {

inline void validate_unit_diagonal_mask(const CMatrix& mask, Index n) {
  if (mask.rows() != n || mask.cols() != n)
    throw DimensionMismatch("mask is " + shape_string(mask) + ", expected " +
                            std::to_string(n) + "x" + std::to_string(n));
  if (hermiticity_defect(mask) > tolerance::kHermitian)
    throw MaskNotPSD("mask is not Hermitian");
  for (Index i = 0; i < n; ++i)
    if (std::abs(mask(i, i) - 1.0) > tolerance::kTrace)
      throw DiagonalNotUnit("mask diagonal entry " + std::to_string(i) + " is " +
                            std::to_string(mask(i, i).real()));
  const double lmin = min_eigenvalue(mask);
  if (lmin < -tolerance::kPsd)
    throw MaskNotPSD("mask has eigenvalue " + std::to_string(lmin));
}

}  // namespace detail

/// log2(n) - S(M/n) for a unit-diagonal PSD mask.
inline double hadamard_bound(const CMatrix& mask, Index n) {
  detail::validate_unit_diagonal_mask(mask, n);
  const DensityMatrix normalized(mask / static_cast<double>(n));
  return std::log2(static_cast<double>(n)) - von_neumann_entropy(normalized);
}

/// Kraus form of rho -> M * rho: M = sum_j |m_j><m_j| over orthogonal
/// eigenvectors, Kraus operators diag(m_j).
inline Channel hadamard_channel(const CMatrix& mask) {
  if (mask.rows() != mask.cols())
    throw DimensionMismatch("mask must be square");
  const Index n = mask.rows();
  std::vector<CMatrix> kraus;
  for (const EigenPair& p : canonical_eigenpairs(mask)) {
    if (p.value < -tolerance::kPsd)
      throw MaskNotPSD("mask has eigenvalue " + std::to_string(p.value));
    if (p.value <= 0.0) continue;
    const CVector m = std::sqrt(p.value) * p.vector;
    kraus.push_back(m.asDiagonal());
  }
  if (kraus.empty()) kraus.push_back(CMatrix::Zero(n, n));
  return Channel(n, n, std::move(kraus));
}

/// |coherent information at the maximally mixed input - hadamard_bound|;
/// the two coincide because the maximally entangled input diagonalizes the
/// joint output.
inline double verify_hqc(const CMatrix& mask, Index n) {
  const double bound = hadamard_bound(mask, n);
  const double ci = coherent_information(hadamard_channel(mask),
                                         DensityMatrix::maximally_mixed(n));
  return std::abs(ci - bound);
}

inline CapacityReport capacity_report(const Channel& channel,
                                      const DensityMatrix& rho) {
  CapacityReport report;
  report.coherent_information = coherent_information(channel, rho);
  report.input_dim = channel.dim_in();
  return report;
}

/// Report for a unit-diagonal mask evaluated at the given input (maximally
/// mixed when omitted).
inline CapacityReport capacity_report(const CMatrix& mask,
                                      const std::optional<DensityMatrix>& rho = std::nullopt) {
  const Index n = mask.rows();
  CapacityReport report;
  report.hadamard_bound = hadamard_bound(mask, n);
  report.coherent_information = coherent_information(
      hadamard_channel(mask), rho ? *rho : DensityMatrix::maximally_mixed(n));
  report.input_dim = n;
  report.hqc_difference = verify_hqc(mask, n);
  return report;
}

}  // namespace covchan
