// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <variant>

#include "ergobound/errors.hpp"

namespace ergobound {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

namespace linalg {

inline constexpr double kResidualTol = 1e-10;
inline constexpr double kSymTol = 1e-10;
inline constexpr double kEigTol = 1e-12;
inline constexpr double kPairTol = 1e-8;
inline constexpr double kConditionCap = 1e8;
inline constexpr double kStabilityTol = 1e-9;

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const std::string& name) {
  require(m.allFinite(), ErrorCode::NonFinite, name + " has non-finite entries");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const std::string& name) {
  require(m.rows() == m.cols() && m.rows() > 0, ErrorCode::DimensionMismatch,
          name + " must be square and non-empty");
}

/// Maximum absolute column sum.
template <typename Derived>
double norm1(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

/// Q^t by binary powering.
template <typename MatrixT>
MatrixT matrix_power(const MatrixT& q, long t) {
  require(t >= 0, ErrorCode::InvalidArgument, "matrix_power needs t >= 0");
  MatrixT result = MatrixT::Identity(q.rows(), q.cols());
  MatrixT base = q;
  while (t > 0) {
    if (t & 1) result = result * base;
    t >>= 1;
    if (t > 0) base = base * base;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

struct SpectralInfo {
  CVector eigenvalues;
  double spectral_radius = 0.0;
  std::optional<CMatrix> eigenvectors;  // unit columns
  bool diagonalizable = false;
  double condition = std::numeric_limits<double>::infinity();
  double residual = 0.0;  // ||A V - V diag(lambda)||_F
};

inline SpectralInfo eigen(const Matrix& a, double tol = kResidualTol) {
  require_square(a, "eigen input");
  require_finite(a, "eigen input");

  Eigen::EigenSolver<Matrix> solver(a, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) fail(ErrorCode::NonConvergence, "real Schur iteration failed");

  SpectralInfo info;
  info.eigenvalues = solver.eigenvalues();
  info.spectral_radius = info.eigenvalues.cwiseAbs().maxCoeff();

  CMatrix v = solver.eigenvectors();
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const double n = v.col(j).norm();
    if (n > 0.0) v.col(j) /= n;
  }
  const CMatrix av = a.cast<Complex>() * v;
  info.residual = (av - v * info.eigenvalues.asDiagonal()).norm();
  // Defective matrices give inaccurate eigenvectors; the eigenvalues stay valid.
  if (info.residual > tol * std::max(1.0, a.norm())) return info;

  Eigen::JacobiSVD<CMatrix> svd(v);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  info.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  info.diagonalizable = info.condition <= kConditionCap;
  info.eigenvectors = std::move(v);
  return info;
}

/// True when non-real eigenvalues of a real matrix can be matched into conjugate pairs.
inline bool conjugate_pairs_matched(const CVector& eigs, double pair_tol = kPairTol) {
  const Eigen::Index n = eigs.size();
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  const double scale = std::max(1.0, eigs.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (used[i] || std::abs(eigs(i).imag()) <= pair_tol * scale) continue;
    bool found = false;
    for (Eigen::Index j = i + 1; j < n && !found; ++j) {
      if (!used[j] && std::abs(eigs(j) - std::conj(eigs(i))) <= pair_tol * scale) {
        used[i] = used[j] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Schur triangularization and the contraction norm
// ---------------------------------------------------------------------------

struct SchurForm {
  CMatrix U;      // unitary
  CMatrix Delta;  // upper triangular, A = U Delta U^*
  double residual = 0.0;
};

inline SchurForm schur_triangularize(const Matrix& a, double tol = kResidualTol) {
  require_square(a, "Schur input");
  require_finite(a, "Schur input");
  const Eigen::Index d = a.rows();
  SchurForm form;

  if (a.triangularView<Eigen::StrictlyLower>().toDenseMatrix().isZero(0.0)) {
    form.U = CMatrix::Identity(d, d);
    form.Delta = a.cast<Complex>();
    return form;
  }

  Eigen::ComplexSchur<CMatrix> schur(a.cast<Complex>(), /*computeU=*/true);
  if (schur.info() != Eigen::Success) fail(ErrorCode::NonConvergence, "complex Schur iteration failed");
  form.U = schur.matrixU();
  form.Delta = schur.matrixT();
  form.Delta.triangularView<Eigen::StrictlyLower>().setZero();

  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  form.residual = (a.cast<Complex>() - form.U * form.Delta * form.U.adjoint()).norm();
  const double unitarity = (form.U.adjoint() * form.U - CMatrix::Identity(d, d)).norm();
  if (form.residual > tol * std::max(scale, 1e-300) + 1e-300 || unitarity > tol * std::max<double>(1.0, d)) {
    fail(ErrorCode::NonConvergence, "Schur factor residual above tolerance");
  }
  return form;
}

/// Contraction norm ||A||_* = ||J U^* A U J^{-1}||_1 with J = diag(k, k^2, ..., k^d).
///
/// The scaling shrinks the strictly upper part of the Schur factor by powers of
/// 1/kappa, so for Schur stable Q and kappa above the threshold
/// max{1, ||Delta||_1 / (1 - rho)} the value is strictly below one.
struct StarNorm {
  CMatrix U;
  CMatrix Delta;
  double kappa = 1.0;
  double threshold = 1.0;
  double spectral_radius = 0.0;
  double value = 0.0;   // ||Q||_*
  double K_d = 1.0;     // |A x| <= K_d ||A||_* |x|
  double C_star = 1.0;  // ||A||_F <= C_star ||A||_*
  double schur_residual = 0.0;

  Eigen::Index dim() const { return U.rows(); }

  /// J B J^{-1} entrywise: B_ij * kappa^(i-j).
  double scaled_norm1(const CMatrix& b) const {
    const Eigen::Index d = b.rows();
    double best = 0.0;
    for (Eigen::Index j = 0; j < d; ++j) {
      double col = 0.0;
      for (Eigen::Index i = 0; i < d; ++i) {
        const double mag = std::abs(b(i, j));
        if (mag != 0.0) col += mag * std::pow(kappa, static_cast<double>(i - j));
      }
      best = std::max(best, col);
    }
    return best;
  }

  double operator()(const Matrix& a) const {
    require(a.rows() == dim() && a.cols() == dim(), ErrorCode::DimensionMismatch, "star norm argument size");
    return scaled_norm1(U.adjoint() * a.cast<Complex>() * U);
  }

  /// S with ||A||_* = ||S^{-1} A S||_1.
  CMatrix similarity() const {
    const Eigen::Index d = dim();
    CMatrix s = U;
    for (Eigen::Index j = 0; j < d; ++j) s.col(j) *= std::pow(kappa, -static_cast<double>(j + 1));
    return s;
  }

  CMatrix similarity_inverse() const {
    const Eigen::Index d = dim();
    CMatrix s = U.adjoint();
    for (Eigen::Index i = 0; i < d; ++i) s.row(i) *= std::pow(kappa, static_cast<double>(i + 1));
    return s;
  }
};

struct AutoMargin {
  double margin = 2.0;
};
struct FixedKappa {
  double kappa;
};
/// Pick kappa minimising K_d ||Q||_*^(t+1) / (1 - ||Q||_*^p)^(1/p), the
/// kappa-dependent factor of the generic coupling bound at step t.
struct OptimizeAt {
  long t;
  double p = 1.0;
};
using KappaPolicy = std::variant<AutoMargin, FixedKappa, OptimizeAt>;

inline double kappa_threshold(const SchurForm& schur) {
  const double rho = schur.Delta.diagonal().cwiseAbs().maxCoeff();
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  return std::max(1.0, norm1(schur.Delta) / (1.0 - rho));
}

/// Assemble the norm for a given kappa without checking stability or admissibility.
inline StarNorm star_norm_with_kappa(const SchurForm& schur, double kappa) {
  require(kappa > 0.0 && std::isfinite(kappa), ErrorCode::InvalidArgument, "kappa must be positive");
  StarNorm star;
  star.U = schur.U;
  star.Delta = schur.Delta;
  star.kappa = kappa;
  star.schur_residual = schur.residual;
  star.spectral_radius = schur.Delta.diagonal().cwiseAbs().maxCoeff();
  star.threshold = kappa_threshold(schur);
  star.value = star.scaled_norm1(schur.Delta);

  const double d = static_cast<double>(star.dim());
  star.K_d = d * std::pow(kappa, d - 1.0) * norm1(star.U) * norm1(star.U.adjoint());
  star.C_star = std::sqrt(d) * norm1(star.similarity()) * norm1(star.similarity_inverse());
  return star;
}

namespace detail {

inline double generic_kappa_objective(const SchurForm& schur, double kappa, const OptimizeAt& policy) {
  const StarNorm s = star_norm_with_kappa(schur, kappa);
  if (s.value >= 1.0) return std::numeric_limits<double>::infinity();
  return std::log(s.K_d) + static_cast<double>(policy.t + 1) * std::log(std::max(s.value, 1e-300)) -
         std::log1p(-std::pow(s.value, policy.p)) / policy.p;
}

inline double optimize_kappa(const SchurForm& schur, double threshold, const OptimizeAt& policy) {
  // Golden-section search on log(kappa) over (threshold, 1e4 * threshold].
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log(threshold) + 1e-9;
  double hi = std::log(threshold) + std::log(1e4);
  auto f = [&](double lk) { return generic_kappa_objective(schur, std::exp(lk), policy); };
  double c = hi - invphi * (hi - lo);
  double e = lo + invphi * (hi - lo);
  double fc = f(c), fe = f(e);
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    if (fc < fe) {
      hi = e; e = c; fe = fc;
      c = hi - invphi * (hi - lo);
      fc = f(c);
    } else {
      lo = c; c = e; fc = fe;
      e = lo + invphi * (hi - lo);
      fe = f(e);
    }
  }
  return std::exp(0.5 * (lo + hi));
}

}  // namespace detail

inline StarNorm build_star_norm(const Matrix& q, const KappaPolicy& policy = AutoMargin{},
                                double stability_tol = kStabilityTol) {
  const SchurForm schur = schur_triangularize(q);
  const double rho = schur.Delta.diagonal().cwiseAbs().maxCoeff();
  require(rho < 1.0 - stability_tol, ErrorCode::NotSchurStable,
          "spectral radius " + std::to_string(rho) + " is not below one");
  const double threshold = kappa_threshold(schur);

  double kappa = 0.0;
  if (const auto* a = std::get_if<AutoMargin>(&policy)) {
    require(a->margin > 1.0, ErrorCode::InvalidArgument, "auto margin must exceed 1");
    kappa = a->margin * threshold;
  } else if (const auto* f = std::get_if<FixedKappa>(&policy)) {
    require(f->kappa > threshold, ErrorCode::KappaBelowThreshold,
            "kappa " + std::to_string(f->kappa) + " not above " + std::to_string(threshold));
    kappa = f->kappa;
  } else {
    const auto& o = std::get<OptimizeAt>(policy);
    require(o.t >= 0 && o.p >= 1.0, ErrorCode::InvalidArgument, "optimize_at needs t >= 0 and p >= 1");
    kappa = detail::optimize_kappa(schur, threshold, o);
  }
  return star_norm_with_kappa(schur, kappa);
}

// ---------------------------------------------------------------------------
// Symmetric kernels
// ---------------------------------------------------------------------------

inline void require_symmetric(const Matrix& s, double sym_tol, const std::string& name) {
  require_square(s, name);
  require_finite(s, name);
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  require((s - s.transpose()).cwiseAbs().maxCoeff() <= sym_tol * scale, ErrorCode::NotSymmetric,
          name + " is not symmetric");
}

inline double smallest_eigenvalue_sym(const Matrix& s, double sym_tol = kSymTol) {
  require_symmetric(s, sym_tol, "matrix");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(s), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) fail(ErrorCode::NonConvergence, "symmetric eigen solver failed");
  return solver.eigenvalues()(0);
}

/// Symmetric PSD square root; eigenvalues in [-eig_tol * scale, 0) are clamped to zero.
inline Matrix psd_sqrt(const Matrix& s, double sym_tol = kSymTol, double eig_tol = kEigTol) {
  require_symmetric(s, sym_tol, "psd_sqrt input");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(s));
  if (solver.info() != Eigen::Success) fail(ErrorCode::NonConvergence, "symmetric eigen solver failed");
  Vector lam = solver.eigenvalues();
  const double scale = std::max(1.0, lam.cwiseAbs().maxCoeff());
  require(lam(0) >= -eig_tol * scale, ErrorCode::NotPSD,
          "eigenvalue " + std::to_string(lam(0)) + " below tolerance");
  lam = lam.cwiseMax(0.0).cwiseSqrt();
  const Matrix& v = solver.eigenvectors();
  return symmetrized(v * lam.asDiagonal() * v.transpose());
}

/// Sum_{j>=0} Q^j V (Q^T)^j by the doubling iteration.
inline Matrix stationary_covariance(const Matrix& q, const Matrix& v, double tol = 1e-13) {
  require_square(q, "Q");
  require_symmetric(v, kSymTol, "noise covariance");
  require(v.rows() == q.rows(), ErrorCode::DimensionMismatch, "Q and V sizes differ");
  const double rho = eigen(q).spectral_radius;
  require(rho < 1.0, ErrorCode::NotSchurStable, "stationary covariance needs rho(Q) < 1");

  Matrix sigma = symmetrized(v);
  Matrix m = q;
  for (int k = 0; k < 80; ++k) {
    const Matrix inc = symmetrized(m * sigma * m.transpose());
    sigma = symmetrized(sigma + inc);
    m = m * m;
    if (inc.norm() <= tol * std::max(1.0, sigma.norm()) && m.norm() < 1.0) return sigma;
  }
  fail(ErrorCode::NonConvergence, "doubling iteration did not converge");
}

}  // namespace linalg
}  // namespace ergobound
