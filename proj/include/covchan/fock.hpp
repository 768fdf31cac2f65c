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

// Truncated single-mode Gaussian displacement channel
//
//   G(rho) = E_{z,r} D(z,r) rho D(z,r)^dagger,  D(z,r) = exp(r(conj(z) a^dag - z a)),
//
// with z uniform on the unit circle and r Rayleigh distributed with scale s.
// Averaging over z keeps only the energy-shift components D_sigma, whose
// matrix elements are Laguerre polynomials:
//
//   <j+sigma| D |j> = e^{-r^2/2} r^sigma sqrt(j!/(j+sigma)!) L_j^(sigma)(r^2)
//
// (sigma >= 0; the sigma < 0 elements follow from the adjoint). The masks are
// M_sigma(j,j') = E_r[d_j(r) d_j'(r)], integrated with u = r^2 and
// Gauss-Laguerre quadrature.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "covchan/covariant.hpp"
#include "covchan/matcore.hpp"
#include "covchan/philox.hpp"
#include "covchan/spectrum.hpp"

namespace covchan {

/// Generalized Laguerre polynomial L_j^(alpha)(x) by the three-term
/// recurrence.
inline double laguerre(int j, int alpha, double x) {
  if (j < 0 || alpha < 0) throw InvalidArgument("laguerre needs j, alpha >= 0");
  double prev = 1.0;  // L_0
  if (j == 0) return prev;
  double cur = 1.0 + alpha - x;  // L_1
  for (int k = 1; k < j; ++k) {
    const double next =
        ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

struct GaussLaguerreRule {
  RVector nodes;
  RVector weights;  // for the weight e^{-x} on [0, inf)
};

namespace detail {

/// L_n(x) and L_{n-1}(x) sharing a common positive scale factor 2^-log2_scale,
/// so that large arguments do not overflow.
struct ScaledLaguerre {
  double value;     // L_n / 2^log2_scale
  double previous;  // L_{n-1} / 2^log2_scale
  double log2_scale;
};

inline ScaledLaguerre scaled_laguerre(Index n, double x) {
  double prev = 0.0;
  double cur = 1.0;
  double log2_scale = 0.0;
  for (Index k = 0; k < n; ++k) {
    const double kd = static_cast<double>(k);
    const double next = ((2.0 * kd + 1.0 - x) * cur - kd * prev) / (kd + 1.0);
    prev = cur;
    cur = next;
    const double mag = std::abs(cur);
    if (mag > 1e100) {
      int e = 0;
      std::frexp(mag, &e);
      prev = std::ldexp(prev, -e);
      cur = std::ldexp(cur, -e);
      log2_scale += e;
    }
  }
  return {cur, prev, log2_scale};
}

}  // namespace detail

/// n-point Gauss-Laguerre rule (Golub-Welsch). Eigenvector weights are only
/// accurate to machine epsilon in absolute terms, so weights below 1e-3 are
/// replaced by x / ((n+1) L_{n+1}(x))^2 evaluated in log space at a
/// Newton-polished node.
inline GaussLaguerreRule gauss_laguerre(Index n) {
  if (n < 1) throw InvalidArgument("quadrature needs at least one node");
  RVector diag(n);
  RVector sub(std::max<Index>(n - 1, 0));
  for (Index k = 0; k < n; ++k) diag(k) = 2.0 * static_cast<double>(k) + 1.0;
  for (Index k = 1; k < n; ++k) sub(k - 1) = static_cast<double>(k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  GaussLaguerreRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = solver.eigenvectors().row(0).transpose().array().square();
  const double nd = static_cast<double>(n);
  for (Index i = 0; i < n; ++i) {
    if (rule.weights(i) >= 1e-3) continue;
    double x = rule.nodes(i);
    for (int iter = 0; iter < 3; ++iter) {
      // x L_n' = n (L_n - L_{n-1})
      const detail::ScaledLaguerre l = detail::scaled_laguerre(n, x);
      const double derivative = nd * (l.value - l.previous) / x;
      if (derivative == 0.0) break;
      const double step = l.value / derivative;
      x -= step;
      if (std::abs(step) <= 1e-16 * x) break;
    }
    rule.nodes(i) = x;
    const detail::ScaledLaguerre l = detail::scaled_laguerre(n + 1, x);
    const double log_weight = std::log(x) - 2.0 * std::log((nd + 1.0) * std::abs(l.value)) -
                              2.0 * l.log2_scale * std::numbers::ln2;
    rule.weights(i) = std::exp(log_weight);
  }
  return rule;
}

namespace detail {

inline Eigen::MatrixXd annihilation(Index dim) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
  for (Index j = 1; j < dim; ++j) a(j - 1, j) = std::sqrt(static_cast<double>(j));
  return a;
}

inline double log_factorial(Index n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace detail

/// D(1, r) = exp(r (a^dag - a)) on `dim` levels via the eigendecomposition of
/// the Hermitian generator i(a^dag - a); D(z, r) = Z D(1, r) Z^dagger with
/// Z = diag(conj(z)^m).
class DisplacementGenerator {
 public:
  explicit DisplacementGenerator(Index dim) : dim_(dim) {
    if (dim < 1) throw InvalidArgument("dim must be positive");
    const Eigen::MatrixXd a = detail::annihilation(dim);
    const CMatrix h = Complex(0.0, 1.0) * (a.transpose() - a).cast<Complex>();
    const HermitianEigen eig = hermitian_eigen(h);
    values_ = eig.values;
    vectors_ = eig.vectors;
  }

  Index dim() const noexcept { return dim_; }

  CMatrix unit_direction(double r) const {
    if (r == 0.0) return CMatrix::Identity(dim_, dim_);
    CVector phase(dim_);
    for (Index i = 0; i < dim_; ++i) phase(i) = std::polar(1.0, -r * values_(i));
    return vectors_ * phase.asDiagonal() * vectors_.adjoint();
  }

  CMatrix operator()(Complex z, double r) const {
    const CVector zd = powers(std::conj(z));
    return zd.asDiagonal() * unit_direction(r) * zd.conjugate().asDiagonal();
  }

  /// D(z, r) psi in O(dim^2).
  CVector apply(Complex z, double r, const CVector& psi) const {
    if (r == 0.0) return psi;
    const CVector zd = powers(std::conj(z));
    CVector w = vectors_.adjoint() * zd.conjugate().cwiseProduct(psi);
    for (Index i = 0; i < dim_; ++i) w(i) *= std::polar(1.0, -r * values_(i));
    return zd.cwiseProduct(vectors_ * w);
  }

 private:
  CVector powers(Complex base) const {
    CVector p(dim_);
    Complex acc = 1.0;
    for (Index m = 0; m < dim_; ++m) {
      p(m) = acc;
      acc *= base;
    }
    return p;
  }

  Index dim_;
  RVector values_;
  CMatrix vectors_;
};

/// Truncated displacement exp(r(conj(z) a^dag - z a)) on `dim` levels.
/// Exactly unitary; agrees with the infinite matrix on low levels only.
inline CMatrix displacement_matrix(Complex z, double r, Index dim) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12)
    throw InvalidArgument("z must lie on the unit circle");
  if (r < 0.0) throw InvalidArgument("r must be non-negative");
  return DisplacementGenerator(dim)(z, r);
}

/// <j+sigma| D(1, r) |j> from the Laguerre closed form (untruncated value).
inline double displacement_element(int sigma, Index j, double r) {
  const Index target = j + sigma;
  if (j < 0 || target < 0) return 0.0;
  const double u = r * r;
  if (sigma >= 0) {
    return std::exp(-0.5 * u) * std::pow(r, sigma) *
           std::exp(0.5 * (detail::log_factorial(j) - detail::log_factorial(target))) *
           laguerre(static_cast<int>(j), sigma, u);
  }
  return std::exp(-0.5 * u) * std::pow(-r, -sigma) *
         std::exp(0.5 * (detail::log_factorial(target) - detail::log_factorial(j))) *
         laguerre(static_cast<int>(target), -sigma, u);
}

/// The sigma-shift component D_sigma(r) of D(1, r): entries (j+sigma, j) only.
inline CMatrix displacement_sector(int sigma, double r, Index dim) {
  if (std::abs(sigma) >= dim)
    throw SectorOutOfRange("|sigma| = " + std::to_string(std::abs(sigma)) +
                           " must be below dim = " + std::to_string(dim));
  CMatrix d = CMatrix::Zero(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    const Index target = j + sigma;
    if (target < 0 || target >= dim) continue;
    d(target, j) = displacement_element(sigma, j, r);
  }
  return d;
}

/// Largest level L such that columns 0..L of the dim-level truncated
/// displacement agree with the 2*dim-level truncation within `tol` on every
/// row; -1 when even the vacuum column is affected by the cutoff.
inline Index safe_levels(double r, Index dim, double tol = 1e-10) {
  const CMatrix small = displacement_matrix(1.0, r, dim);
  const CMatrix large = displacement_matrix(1.0, r, 2 * dim);
  Index last = -1;
  for (Index j = 0; j < dim; ++j) {
    const double err = (small.col(j) - large.col(j).head(dim)).cwiseAbs().maxCoeff();
    if (err > tol) break;
    last = j;
  }
  return last;
}

struct FockParams {
  Index dim = 16;
  double std_dev = 1.0;
  Index sigma_max = 15;
  Index quad_points = 64;
  Index mc_samples = 100000;
  std::uint64_t seed = 0;

  static Index default_quad_points(Index dim) {
    return std::max<Index>(2 * dim, 64);
  }

  void validate() const {
    if (dim < 2) throw InvalidArgument("dim must be at least 2");
    if (sigma_max < 0 || sigma_max >= dim)
      throw InvalidArgument("sigma_max must lie in [0, dim)");
    if (quad_points < 2 * dim)
      throw InvalidArgument("quad_points must be at least 2*dim");
    if (!(std_dev > 0.0) || !std::isfinite(std_dev))
      throw InvalidArgument("std_dev must be positive");
    if (mc_samples < 1) throw InvalidArgument("mc_samples must be positive");
  }
};

/// M_sigma(j, j') with the rule's node count. Negative sigma uses
/// M_sigma(j, j') = M_{|sigma|}(j - |sigma|, j' - |sigma|); entries outside
/// the sector's domain are 0.
inline double gaussian_mask(int sigma, Index j, Index jp, double s,
                            const GaussLaguerreRule& rule) {
  if (!(s > 0.0)) throw InvalidArgument("std_dev must be positive");
  if (sigma < 0) {
    j += sigma;
    jp += sigma;
    sigma = -sigma;
  }
  if (j < 0 || jp < 0) return 0.0;
  const Index degree = sigma + j + jp;
  if (degree > 2 * rule.nodes.size() - 1)
    throw QuadratureUnderResolved(
        "integrand degree " + std::to_string(degree) + " needs at least " +
        std::to_string(degree / 2 + 1) + " nodes, have " +
        std::to_string(rule.nodes.size()));
  // u = r^2; p(r) dr = beta e^{-beta u} du with beta = 1/(2 s^2). The e^{-u}
  // from |e^{-r^2/2}|^2 joins it, and x = (1 + beta) u puts the integrand in
  // Gauss-Laguerre form with a polynomial remainder.
  const double beta = 1.0 / (2.0 * s * s);
  const double scale = 1.0 + beta;
  const double norm = 0.5 * (detail::log_factorial(j) - detail::log_factorial(j + sigma) +
                             detail::log_factorial(jp) - detail::log_factorial(jp + sigma));
  double acc = 0.0;
  for (Index i = 0; i < rule.nodes.size(); ++i) {
    const double u = rule.nodes(i) / scale;
    acc += rule.weights(i) * std::pow(u, sigma) *
           laguerre(static_cast<int>(j), sigma, u) *
           laguerre(static_cast<int>(jp), sigma, u);
  }
  return beta / scale * std::exp(norm) * acc;
}

inline double gaussian_mask(int sigma, Index j, Index jp, double s,
                            Index quad_points) {
  return gaussian_mask(sigma, j, jp, s, gauss_laguerre(quad_points));
}

struct GaussianDecomposition {
  FockParams params;
  SectorDecomposition sectors;
  /// |1 - sum_sigma M_sigma(j, j)| per level j, from the truncation.
  std::vector<double> truncation_defect;
};

inline GaussianDecomposition gaussian_decomposition(const FockParams& params) {
  params.validate();
  const Index n = params.dim;
  const GaussLaguerreRule rule = gauss_laguerre(params.quad_points);
  std::vector<std::pair<double, CMatrix>> masks;
  for (Index sigma = -params.sigma_max; sigma <= params.sigma_max; ++sigma) {
    CMatrix mask = CMatrix::Zero(n, n);
    const Index lo = std::max<Index>(0, -sigma);
    const Index hi = std::min<Index>(n, n - sigma);
    for (Index j = lo; j < hi; ++j)
      for (Index jp = j; jp < hi; ++jp) {
        const double m = gaussian_mask(static_cast<int>(sigma), j, jp,
                                       params.std_dev, rule);
        mask(j, jp) = m;
        mask(jp, j) = m;
      }
    masks.emplace_back(static_cast<double>(sigma), std::move(mask));
  }
  SectorDecomposition sectors(Spectrum::integer_ladder(n), std::move(masks));
  const RVector sums = sectors.diagonal_sums();
  std::vector<double> defect(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) defect[static_cast<std::size_t>(j)] = std::abs(1.0 - sums(j));
  return {params, std::move(sectors), std::move(defect)};
}

struct MonteCarloEstimate {
  CMatrix mean;
  /// sqrt(var(re) + var(im)) / sqrt(samples) per entry (sample variances).
  Eigen::MatrixXd standard_error;
  Index samples = 0;
};

/// Draw i uses Philox with counter (i, 0, 0, 0) and the seed as key:
/// z = e^{2 pi i u1}, r = s sqrt(-2 ln(1 - u2)). Accumulation runs in sample
/// order, so the result depends only on (rho, params).
inline MonteCarloEstimate monte_carlo_channel(const DensityMatrix& rho,
                                              const FockParams& params) {
  params.validate();
  const Index n = params.dim;
  if (rho.dim() != n)
    throw DimensionMismatch("state has dim " + std::to_string(rho.dim()) +
                            ", params.dim is " + std::to_string(n));
  const DisplacementGenerator gen(n);

  // rho = sum_k w_k psi_k psi_k^dagger, so each sample costs O(rank * n^2).
  std::vector<double> weights;
  std::vector<CVector> vectors;
  for (const EigenPair& p : canonical_eigenpairs(rho.matrix()))
    if (p.value > 0.0) {
      weights.push_back(p.value);
      vectors.push_back(p.vector);
    }

  const Philox4x32::Key key = Philox4x32::key_from_seed(params.seed);
  CMatrix sum = CMatrix::Zero(n, n);
  Eigen::MatrixXd sq_re = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd sq_im = Eigen::MatrixXd::Zero(n, n);
  CMatrix sample(n, n);
  for (Index i = 0; i < params.mc_samples; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    const Philox4x32::Counter bits = Philox4x32::generate(
        {static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(idx >> 32), 0u, 0u},
        key);
    const double u1 = Philox4x32::to_unit(bits[0], bits[1]);
    const double u2 = Philox4x32::to_unit(bits[2], bits[3]);
    const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * u1);
    const double r = params.std_dev * std::sqrt(-2.0 * std::log1p(-u2));
    sample.setZero();
    for (std::size_t k = 0; k < vectors.size(); ++k) {
      const CVector phi = gen.apply(z, r, vectors[k]);
      sample.noalias() += weights[k] * (phi * phi.adjoint());
    }
    sum += sample;
    sq_re.array() += sample.real().array().square();
    sq_im.array() += sample.imag().array().square();
  }
  const auto count = static_cast<double>(params.mc_samples);
  MonteCarloEstimate est;
  est.samples = params.mc_samples;
  est.mean = sum / count;
  est.standard_error = Eigen::MatrixXd::Zero(n, n);
  if (params.mc_samples > 1) {
    const Eigen::ArrayXXd var_re =
        ((sq_re.array() - count * est.mean.real().array().square()) / (count - 1.0)).max(0.0);
    const Eigen::ArrayXXd var_im =
        ((sq_im.array() - count * est.mean.imag().array().square()) / (count - 1.0)).max(0.0);
    est.standard_error = ((var_re + var_im) / count).sqrt().matrix();
  }
  return est;
}

struct McComparison {
  double max_entry_deviation = 0.0;
  double max_allowed = 0.0;
  double worst_ratio = 0.0;  // max over entries of deviation / allowed
  double truncation_floor = 0.0;
  bool within_tolerance = false;
  CMatrix decomposition_output;
  MonteCarloEstimate monte_carlo;
};

/// Quadrature-decomposition output versus the Monte Carlo average. Entry
/// (m, n) may deviate by max(3 SE(m, n), max truncation defect over the
/// levels occupied by rho).
inline McComparison compare_decomposition_to_mc(const FockParams& params,
                                                const DensityMatrix& rho) {
  const GaussianDecomposition g = gaussian_decomposition(params);
  McComparison cmp;
  cmp.decomposition_output = covchan::apply(reconstruct(g.sectors), rho.matrix());
  cmp.monte_carlo = monte_carlo_channel(rho, params);
  for (Index j = 0; j < rho.dim(); ++j)
    if (rho.matrix()(j, j).real() > tolerance::kPsd)
      cmp.truncation_floor =
          std::max(cmp.truncation_floor, g.truncation_defect[static_cast<std::size_t>(j)]);
  for (Index r = 0; r < rho.dim(); ++r)
    for (Index c = 0; c < rho.dim(); ++c) {
      const double dev = std::abs(cmp.decomposition_output(r, c) - cmp.monte_carlo.mean(r, c));
      const double allowed =
          std::max(3.0 * cmp.monte_carlo.standard_error(r, c), cmp.truncation_floor);
      cmp.max_entry_deviation = std::max(cmp.max_entry_deviation, dev);
      cmp.max_allowed = std::max(cmp.max_allowed, allowed);
      const double ratio = allowed > 0.0 ? dev / allowed : (dev > 0.0 ? INFINITY : 0.0);
      cmp.worst_ratio = std::max(cmp.worst_ratio, ratio);
    }
  cmp.within_tolerance = cmp.worst_ratio <= 1.0;
  return cmp;
}

}  // namespace covchan
