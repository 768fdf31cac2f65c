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

// Dense complex linear algebra and the quantum primitives shared by the
// rest of the library: density matrices, Kraus channels, Choi matrices and
// von Neumann entropy.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "covchan/errors.hpp"

namespace covchan {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Default numerical tolerances. Every validating entry point takes an
/// explicit override.
namespace tolerance {
inline constexpr double kHermitian = 1e-9;
inline constexpr double kTrace = 1e-9;
inline constexpr double kPsd = 1e-9;
inline constexpr double kTp = 1e-9;
}  // namespace tolerance

inline bool all_finite(const CMatrix& m) {
  for (Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

/// max |m - m^dagger| entrywise.
inline double hermiticity_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline std::string shape_string(const CMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // columns
};

/// Eigendecomposition of the Hermitian part (m + m^dagger)/2.
inline HermitianEigen hermitian_eigen(const CMatrix& m) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw Error("hermitian eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline double min_eigenvalue(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

namespace detail {

inline bool lexicographic_less(const CVector& a, const CVector& b) {
  for (Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

// Rotate v so that its first entry of (near) maximal modulus is real and
// positive.
inline void fix_phase(CVector& v) {
  if (v.size() == 0) return;
  const double peak = v.cwiseAbs().maxCoeff();
  if (peak == 0.0) return;
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= peak * (1.0 - 1e-10)) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = Complex(std::abs(v(i)), 0.0);
      return;
    }
  }
}

}  // namespace detail

struct EigenPair {
  double value;
  CVector vector;
};

/// Eigenpairs of a Hermitian matrix in a reproducible gauge: sorted by
/// descending eigenvalue, phases fixed so the leading entry of maximal
/// modulus is real positive, near-degenerate groups ordered
/// lexicographically by their entries.
inline std::vector<EigenPair> canonical_eigenpairs(const CMatrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  std::vector<EigenPair> pairs;
  pairs.reserve(static_cast<std::size_t>(eig.values.size()));
  for (Index i = eig.values.size() - 1; i >= 0; --i) {
    CVector v = eig.vectors.col(i);
    detail::fix_phase(v);
    pairs.push_back({eig.values(i), std::move(v)});
  }
  const double scale =
      pairs.empty() ? 0.0 : std::max(std::abs(pairs.front().value),
                                     std::abs(pairs.back().value));
  const double tie = 1e-12 * std::max(scale, 1.0);
  std::size_t begin = 0;
  while (begin < pairs.size()) {
    std::size_t end = begin + 1;
    while (end < pairs.size() &&
           pairs[end - 1].value - pairs[end].value <= tie)
      ++end;
    std::sort(pairs.begin() + static_cast<std::ptrdiff_t>(begin),
              pairs.begin() + static_cast<std::ptrdiff_t>(end),
              [](const EigenPair& a, const EigenPair& b) {
                return detail::lexicographic_less(a.vector, b.vector);
              });
    begin = end;
  }
  return pairs;
}

/// A validated density operator: Hermitian, positive semidefinite, unit
/// trace (all within the tolerance given at construction).
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix m, double tol = tolerance::kTrace)
      : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
      throw DimensionMismatch("density matrix must be square and non-empty, got " +
                             shape_string(matrix_));
    if (!all_finite(matrix_))
      throw NotDensityMatrix("non-finite entries");
    if (hermiticity_defect(matrix_) > tol)
      throw NotDensityMatrix("not Hermitian (defect " +
                             std::to_string(hermiticity_defect(matrix_)) + ")");
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > tol)
      throw NotDensityMatrix("trace " + std::to_string(tr) + " != 1");
    const double lmin = min_eigenvalue(matrix_);
    if (lmin < -tol)
      throw NotDensityMatrix("negative eigenvalue " + std::to_string(lmin));
  }

  static DensityMatrix pure(const CVector& psi,
                            double tol = tolerance::kTrace) {
    return DensityMatrix(psi * psi.adjoint(), tol);
  }

  static DensityMatrix maximally_mixed(Index n) {
    return DensityMatrix(CMatrix::Identity(n, n) / static_cast<double>(n));
  }

  Index dim() const noexcept { return matrix_.rows(); }
  const CMatrix& matrix() const noexcept { return matrix_; }

  /// Eigenvalues in ascending order, with roundoff negatives clipped to 0.
  RVector eigenvalues() const {
    const CMatrix h = 0.5 * (matrix_ + matrix_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseMax(0.0);
  }

 private:
  CMatrix matrix_;
};

/// Completely positive map in Kraus form, G(X) = sum_j A_j X A_j^dagger.
/// Every Kraus operator is dim_out x dim_in. Trace preservation and complete
/// positivity are checkable via is_cptp, not enforced.
class Channel {
 public:
  Channel(Index dim_in, Index dim_out, std::vector<CMatrix> kraus)
      : dim_in_(dim_in), dim_out_(dim_out), kraus_(std::move(kraus)) {
    validate();
  }

  explicit Channel(std::vector<CMatrix> kraus)
      : dim_in_(kraus.empty() ? 0 : kraus.front().cols()),
        dim_out_(kraus.empty() ? 0 : kraus.front().rows()),
        kraus_(std::move(kraus)) {
    validate();
  }

  static Channel identity(Index n) {
    return Channel(n, n, {CMatrix::Identity(n, n)});
  }

  Index dim_in() const noexcept { return dim_in_; }
  Index dim_out() const noexcept { return dim_out_; }
  bool is_square() const noexcept { return dim_in_ == dim_out_; }
  const std::vector<CMatrix>& kraus() const noexcept { return kraus_; }

 private:
  void validate() const {
    if (dim_in_ <= 0 || dim_out_ <= 0)
      throw DimensionMismatch("channel dimensions must be positive");
    for (const CMatrix& a : kraus_) {
      if (a.rows() != dim_out_ || a.cols() != dim_in_)
        throw DimensionMismatch("Kraus operator is " + shape_string(a) +
                                ", expected " + std::to_string(dim_out_) +
                                "x" + std::to_string(dim_in_));
      if (!all_finite(a)) throw InvalidArgument("non-finite Kraus entry");
    }
  }

  Index dim_in_;
  Index dim_out_;
  std::vector<CMatrix> kraus_;
};

/// Choi matrix with entries C[(j',j),(k',k)] = <j'| G(|j><k|) |k'>.
/// Row index of (j',j) is j' * dim_in + j (output index major), so the Choi
/// matrix equals sum_m vec(A_m) vec(A_m)^dagger with vec the row-major
/// flattening of each Kraus operator.
class ChoiMatrix {
 public:
  ChoiMatrix(Index dim_in, Index dim_out, CMatrix matrix)
      : dim_in_(dim_in), dim_out_(dim_out), matrix_(std::move(matrix)) {
    if (matrix_.rows() != dim_in_ * dim_out_ ||
        matrix_.cols() != dim_in_ * dim_out_)
      throw DimensionMismatch("Choi matrix is " + shape_string(matrix_) +
                              " for dims " + std::to_string(dim_in_) + "->" +
                              std::to_string(dim_out_));
  }

  Index dim_in() const noexcept { return dim_in_; }
  Index dim_out() const noexcept { return dim_out_; }
  const CMatrix& matrix() const noexcept { return matrix_; }

  Index index(Index out, Index in) const noexcept {
    return out * dim_in_ + in;
  }
  /// <out_row| G(|in_row><in_col|) |out_col>
  Complex operator()(Index out_row, Index in_row, Index out_col,
                     Index in_col) const {
    return matrix_(index(out_row, in_row), index(out_col, in_col));
  }

 private:
  Index dim_in_;
  Index dim_out_;
  CMatrix matrix_;
};

/// Applies the channel to an arbitrary operator (not necessarily a state).
inline CMatrix apply(const Channel& channel, const CMatrix& op) {
  if (op.rows() != channel.dim_in() || op.cols() != channel.dim_in())
    throw DimensionMismatch("operator is " + shape_string(op) +
                            ", channel input dim is " +
                            std::to_string(channel.dim_in()));
  CMatrix out = CMatrix::Zero(channel.dim_out(), channel.dim_out());
  for (const CMatrix& a : channel.kraus()) out.noalias() += a * op * a.adjoint();
  return out;
}

/// Applies the channel to a state; throws NotDensityMatrix when the output
/// is not a state (e.g. trace-decreasing channels).
inline DensityMatrix apply(const Channel& channel, const DensityMatrix& rho,
                           double tol = tolerance::kTrace) {
  return DensityMatrix(covchan::apply(channel, rho.matrix()), tol);
}

namespace detail {
inline CVector vec_row_major(const CMatrix& a) {
  CVector v(a.size());
  for (Index r = 0; r < a.rows(); ++r)
    for (Index c = 0; c < a.cols(); ++c) v(r * a.cols() + c) = a(r, c);
  return v;
}
}  // namespace detail

inline ChoiMatrix choi_of(const Channel& channel) {
  const Index n = channel.dim_in() * channel.dim_out();
  CMatrix c = CMatrix::Zero(n, n);
  for (const CMatrix& a : channel.kraus()) {
    const CVector v = detail::vec_row_major(a);
    c.noalias() += v * v.adjoint();
  }
  return ChoiMatrix(channel.dim_in(), channel.dim_out(), std::move(c));
}

/// Kraus family from the Choi eigendecomposition, ordered by descending
/// eigenvalue (see canonical_eigenpairs for the gauge).
inline Channel kraus_from_choi(const ChoiMatrix& choi,
                               double tol = tolerance::kPsd) {
  if (hermiticity_defect(choi.matrix()) > tol)
    throw NotCP("Choi matrix is not Hermitian");
  const std::vector<EigenPair> pairs = canonical_eigenpairs(choi.matrix());
  const double lmin = pairs.empty() ? 0.0 : pairs.back().value;
  if (lmin < -tol)
    throw NotCP("Choi matrix has eigenvalue " + std::to_string(lmin));
  const double lmax = pairs.empty() ? 0.0 : pairs.front().value;
  const double cutoff =
      1e-14 * static_cast<double>(choi.matrix().rows()) * std::max(lmax, 0.0);

  std::vector<CMatrix> kraus;
  for (const EigenPair& p : pairs) {
    if (p.value <= cutoff) break;
    CMatrix a(choi.dim_out(), choi.dim_in());
    const double w = std::sqrt(p.value);
    for (Index r = 0; r < a.rows(); ++r)
      for (Index c = 0; c < a.cols(); ++c)
        a(r, c) = w * p.vector(r * choi.dim_in() + c);
    kraus.push_back(std::move(a));
  }
  if (kraus.empty())
    kraus.push_back(CMatrix::Zero(choi.dim_out(), choi.dim_in()));
  return Channel(choi.dim_in(), choi.dim_out(), std::move(kraus));
}

/// Frobenius distance between the Choi matrices of two channels.
inline double choi_distance(const Channel& a, const Channel& b) {
  if (a.dim_in() != b.dim_in() || a.dim_out() != b.dim_out())
    throw DimensionMismatch("channels have different dimensions");
  return (choi_of(a).matrix() - choi_of(b).matrix()).norm();
}

struct CptpReport {
  double tp_defect = 0.0;  // ||sum A^dagger A - I||_F
  double cp_defect = 0.0;  // max(0, -lambda_min(Choi))

  bool within(double tol) const noexcept {
    return tp_defect <= tol && cp_defect <= tol;
  }
};

inline CptpReport is_cptp(const Channel& channel) {
  CMatrix sum = CMatrix::Zero(channel.dim_in(), channel.dim_in());
  for (const CMatrix& a : channel.kraus()) sum.noalias() += a.adjoint() * a;
  CptpReport report;
  report.tp_defect =
      (sum - CMatrix::Identity(channel.dim_in(), channel.dim_in())).norm();
  report.cp_defect = std::max(0.0, -min_eigenvalue(choi_of(channel).matrix()));
  return report;
}

/// Shannon entropy in bits. Entries in [-tol, 0) count as zero; anything
/// more negative is rejected.
inline double shannon_entropy(std::span<const double> probabilities,
                              double tol = tolerance::kPsd) {
  double s = 0.0;
  for (double p : probabilities) {
    if (p < -tol)
      throw NotDensityMatrix("negative probability " + std::to_string(p));
    if (p > 0.0) s -= p * std::log2(p);
  }
  return std::max(s, 0.0);
}

inline double von_neumann_entropy(const DensityMatrix& rho) {
  const RVector lambda = rho.eigenvalues();
  return shannon_entropy(std::span<const double>(lambda.data(),
                                                 static_cast<std::size_t>(lambda.size())));
}

/// Entrywise (Schur) product.
inline CMatrix hadamard_product(const CMatrix& mask, const CMatrix& rho) {
  if (mask.rows() != rho.rows() || mask.cols() != rho.cols())
    throw DimensionMismatch("mask is " + shape_string(mask) + ", operand is " +
                            shape_string(rho));
  return mask.cwiseProduct(rho);
}

/// (id (x) G) on an operator of the bipartite space C^n (x) C^n, with the
/// identity acting on the left factor. Index (a, b) maps to a * n + b.
inline CMatrix bipartite_apply(const Channel& channel, const CMatrix& state) {
  if (!channel.is_square())
    throw DimensionMismatch("bipartite_apply needs a square channel");
  const Index n = channel.dim_in();
  if (state.rows() != n * n || state.cols() != n * n)
    throw DimensionMismatch("bipartite operator is " + shape_string(state) +
                            ", expected " + std::to_string(n * n) + "x" +
                            std::to_string(n * n));
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix out = CMatrix::Zero(n * n, n * n);
  for (const CMatrix& a : channel.kraus()) {
    const CMatrix k = Eigen::kroneckerProduct(id, a).eval();
    out.noalias() += k * state * k.adjoint();
  }
  return out;
}

inline DensityMatrix bipartite_apply(const Channel& channel,
                                     const DensityMatrix& state,
                                     double tol = tolerance::kTrace) {
  return DensityMatrix(bipartite_apply(channel, state.matrix()), tol);
}

}  // namespace covchan
