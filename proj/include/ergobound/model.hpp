// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "ergobound/errors.hpp"
#include "ergobound/linalg.hpp"

namespace ergobound {

enum class NoiseFamily { gaussian, laplace, student_t, uniform, point_mass };

inline std::string_view family_name(NoiseFamily f) {
  switch (f) {
    case NoiseFamily::gaussian: return "gaussian";
    case NoiseFamily::laplace: return "laplace";
    case NoiseFamily::student_t: return "student_t";
    case NoiseFamily::uniform: return "uniform";
    case NoiseFamily::point_mass: return "point_mass";
  }
  return "unknown";
}

inline NoiseFamily parse_family(std::string_view s) {
  for (auto f : {NoiseFamily::gaussian, NoiseFamily::laplace, NoiseFamily::student_t, NoiseFamily::uniform,
                 NoiseFamily::point_mass}) {
    if (family_name(f) == s) return f;
  }
  fail(ErrorCode::InvalidArgument, "unknown noise family '" + std::string(s) + "'");
}

/// I.i.d. driving noise xi = loading * eta.
///
/// The base vector eta has k coordinates. Gaussian coordinates are jointly
/// normal with covariance `base_cov`; for the other families the coordinates
/// are independent with location `location` and per-coordinate `scale`
/// (Laplace scale b, Student-t scale, uniform half-width).
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::gaussian;
  Vector location;
  Matrix base_cov;  // gaussian only
  Vector scale;     // laplace, student_t, uniform
  double dof = std::numeric_limits<double>::infinity();
  Matrix loading;  // d x k

  static NoiseSpec gaussian(const Vector& mean, const Matrix& cov) {
    require(mean.size() == cov.rows(), ErrorCode::DimensionMismatch, "gaussian mean/covariance sizes differ");
    linalg::require_symmetric(cov, linalg::kSymTol, "noise covariance");
    require(smallest_eigen_ok(cov), ErrorCode::NotPSD, "noise covariance is not PSD");
    NoiseSpec n;
    n.family = NoiseFamily::gaussian;
    n.location = mean;
    n.base_cov = cov;
    n.loading = Matrix::Identity(mean.size(), mean.size());
    return n;
  }
  static NoiseSpec gaussian1(double mean, double variance) {
    return gaussian(Vector::Constant(1, mean), Matrix::Constant(1, 1, variance));
  }

  static NoiseSpec laplace(const Vector& loc, const Vector& b) { return independent(NoiseFamily::laplace, loc, b); }

  static NoiseSpec student_t(double nu, const Vector& s) {
    require(nu > 0.0, ErrorCode::InvalidArgument, "student_t degrees of freedom must be positive");
    NoiseSpec n = independent(NoiseFamily::student_t, Vector::Zero(s.size()), s);
    n.dof = nu;
    return n;
  }

  static NoiseSpec uniform(const Vector& half_width) {
    return independent(NoiseFamily::uniform, Vector::Zero(half_width.size()), half_width);
  }

  static NoiseSpec point_mass(const Vector& value) {
    NoiseSpec n;
    n.family = NoiseFamily::point_mass;
    n.location = value;
    n.loading = Matrix::Identity(value.size(), value.size());
    linalg::require_finite(value, "point mass value");
    return n;
  }

  /// Same base law pushed through a different loading.
  NoiseSpec lifted(const Matrix& new_loading) const {
    require(new_loading.cols() == base_dim(), ErrorCode::DimensionMismatch, "loading columns must match base dim");
    linalg::require_finite(new_loading, "loading");
    NoiseSpec n = *this;
    n.loading = new_loading;
    return n;
  }

  Eigen::Index base_dim() const { return location.size(); }
  Eigen::Index dim() const { return loading.rows(); }

  double r_max() const {
    return family == NoiseFamily::student_t ? dof : std::numeric_limits<double>::infinity();
  }
  /// E|xi|^r < infinity. Strict for Student-t: the moment of order nu diverges.
  bool moment_available(double r) const { return r < r_max(); }

  Vector mean() const {
    require(moment_available(1.0), ErrorCode::MomentUnavailable, "noise has no finite mean");
    return loading * location;
  }

  Matrix base_covariance() const {
    const Eigen::Index k = base_dim();
    switch (family) {
      case NoiseFamily::gaussian: return base_cov;
      case NoiseFamily::laplace: return (2.0 * scale.array().square()).matrix().asDiagonal();
      case NoiseFamily::student_t:
        require(dof > 2.0, ErrorCode::MomentUnavailable, "student_t covariance needs nu > 2");
        return (scale.array().square() * (dof / (dof - 2.0))).matrix().asDiagonal();
      case NoiseFamily::uniform: return (scale.array().square() / 3.0).matrix().asDiagonal();
      case NoiseFamily::point_mass: return Matrix::Zero(k, k);
    }
    return Matrix::Zero(k, k);
  }

  Matrix covariance() const { return linalg::symmetrized(loading * base_covariance() * loading.transpose()); }

 private:
  static bool smallest_eigen_ok(const Matrix& c) {
    if (c.size() == 0) return true;
    Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::symmetrized(c), Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    return es.eigenvalues()(0) >= -linalg::kEigTol * scale;
  }

  static NoiseSpec independent(NoiseFamily f, const Vector& loc, const Vector& s) {
    require(loc.size() == s.size() && s.size() > 0, ErrorCode::DimensionMismatch, "location/scale sizes differ");
    require(s.allFinite() && (s.array() > 0.0).all(), ErrorCode::InvalidArgument, "scales must be positive");
    linalg::require_finite(loc, "location");
    NoiseSpec n;
    n.family = f;
    n.location = loc;
    n.scale = s;
    n.loading = Matrix::Identity(s.size(), s.size());
    return n;
  }
};

struct RawProvenance {};
struct ArProvenance {
  std::vector<double> phi;
  std::vector<double> a;
};
struct ArmaProvenance {
  std::vector<double> phi;
  std::vector<double> theta;
};
using Provenance = std::variant<RawProvenance, ArProvenance, ArmaProvenance>;

/// X_t = Q X_{t-1} + Sigma xi_t.
struct StateSpaceModel {
  Matrix Q;
  Matrix Sigma;
  NoiseSpec noise;
  Provenance provenance;

  Eigen::Index dim() const { return Q.rows(); }

  /// E[Sigma xi_1]
  Vector drift_mean() const { return Sigma * noise.mean(); }
  /// Cov(Sigma xi_1)
  Matrix drift_covariance() const { return linalg::symmetrized(Sigma * noise.covariance() * Sigma.transpose()); }
  /// (I - Q)^{-1} E[Sigma xi_1]
  Vector stationary_mean() const {
    const Eigen::Index d = dim();
    return (Matrix::Identity(d, d) - Q).partialPivLu().solve(drift_mean());
  }
};

inline void check_model_shapes(const StateSpaceModel& m) {
  linalg::require_square(m.Q, "Q");
  linalg::require_finite(m.Q, "Q");
  linalg::require_finite(m.Sigma, "Sigma");
  require(m.Sigma.rows() == m.Q.rows() && m.Sigma.cols() == m.Q.rows(), ErrorCode::DimensionMismatch,
          "Sigma must be d x d");
  require(m.noise.dim() == m.Q.rows(), ErrorCode::DimensionMismatch, "noise dimension must equal d");
}

inline StateSpaceModel make_model(const Matrix& q, const Matrix& sigma, const NoiseSpec& noise) {
  StateSpaceModel m{q, sigma, noise, RawProvenance{}};
  check_model_shapes(m);
  return m;
}

inline Matrix companion(const std::vector<double>& phi) {
  require(!phi.empty(), ErrorCode::EmptyCoefficients, "phi is empty");
  const auto p = static_cast<Eigen::Index>(phi.size());
  Matrix q = Matrix::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) q(0, j) = phi[j];
  for (Eigen::Index i = 1; i < p; ++i) q(i, i - 1) = 1.0;
  return q;
}

/// AR(p) in companion form; the scalar noise enters the first coordinate only.
inline StateSpaceModel ar_state_space(const std::vector<double>& phi, const std::vector<double>& a,
                                      const NoiseSpec& noise1d) {
  require(!phi.empty(), ErrorCode::EmptyCoefficients, "phi is empty");
  const auto p = static_cast<Eigen::Index>(phi.size());
  require(a.empty() || static_cast<Eigen::Index>(a.size()) == p - 1, ErrorCode::DimensionMismatch,
          "a must have p-1 entries");
  require(noise1d.dim() == 1, ErrorCode::DimensionMismatch, "AR noise must be scalar");
  for (double v : phi) require(std::isfinite(v), ErrorCode::NonFinite, "phi has non-finite entries");
  for (double v : a) require(std::isfinite(v) && v >= 0.0, ErrorCode::InvalidArgument, "a entries must be >= 0");

  Matrix sigma = Matrix::Zero(p, p);
  sigma(0, 0) = 1.0;
  for (Eigen::Index j = 1; j < p; ++j) sigma(j, j) = a.empty() ? 0.0 : a[j - 1];
  Matrix load = Matrix::Zero(p, noise1d.base_dim());
  load.row(0) = noise1d.loading.row(0);

  StateSpaceModel m{companion(phi), sigma, noise1d.lifted(load),
                    ArProvenance{phi, a.empty() ? std::vector<double>(p - 1, 0.0) : a}};
  return m;
}

/// ARMA(p, q) in the (p+q)-dimensional state (Y_t..Y_{t-p+1}, eps_t..eps_{t-q+1}).
/// The innovation is loaded on coordinates 1 and p+1 so both blocks see eps_t.
inline StateSpaceModel arma_state_space(const std::vector<double>& phi, const std::vector<double>& theta,
                                        const NoiseSpec& noise1d) {
  require(!phi.empty(), ErrorCode::EmptyCoefficients, "phi is empty");
  const auto p = static_cast<Eigen::Index>(phi.size());
  const auto q = static_cast<Eigen::Index>(theta.size());
  require(q >= 1 && q <= p, ErrorCode::OrderViolation, "ARMA needs 1 <= q <= p");
  require(noise1d.dim() == 1, ErrorCode::DimensionMismatch, "ARMA noise must be scalar");
  for (double v : phi) require(std::isfinite(v), ErrorCode::NonFinite, "phi has non-finite entries");
  for (double v : theta) require(std::isfinite(v), ErrorCode::NonFinite, "theta has non-finite entries");

  const Eigen::Index d = p + q;
  Matrix qm = Matrix::Zero(d, d);
  qm.topLeftCorner(p, p) = companion(phi);
  for (Eigen::Index j = 0; j < q; ++j) qm(0, p + j) = theta[j];
  for (Eigen::Index i = 1; i < q; ++i) qm(p + i, p + i - 1) = 1.0;

  Matrix sigma = Matrix::Zero(d, d);
  sigma(0, 0) = 1.0;
  sigma(p, p) = 1.0;
  Matrix load = Matrix::Zero(d, noise1d.base_dim());
  load.row(0) = noise1d.loading.row(0);
  load.row(p) = noise1d.loading.row(0);

  return StateSpaceModel{qm, sigma, noise1d.lifted(load), ArmaProvenance{phi, theta}};
}

struct ModelDiagnostics {
  double spectral_radius = 0.0;
  bool stable = false;
  double r = 1.0;
  double r_max = 0.0;
  bool moment_available = false;
  bool gaussian = false;
  bool stationary_nonsingular = false;
  bool gauss_flavors_applicable = false;
  std::vector<std::string> flags;  // error names for failed checks
};

inline ModelDiagnostics validate_model(const StateSpaceModel& m, double r) {
  ModelDiagnostics diag;
  diag.r = r;
  try {
    check_model_shapes(m);
  } catch (const Error& e) {
    diag.flags.emplace_back(error_name(e.code()));
    return diag;
  }
  if (!(r >= 1.0)) diag.flags.emplace_back(error_name(ErrorCode::InvalidArgument));

  diag.spectral_radius = linalg::eigen(m.Q).spectral_radius;
  diag.stable = diag.spectral_radius < 1.0 - linalg::kStabilityTol;
  if (!diag.stable) diag.flags.emplace_back(error_name(ErrorCode::NotSchurStable));

  diag.r_max = m.noise.r_max();
  diag.moment_available = m.noise.moment_available(r);
  if (!diag.moment_available) diag.flags.emplace_back(error_name(ErrorCode::MomentUnavailable));

  diag.gaussian = m.noise.family == NoiseFamily::gaussian;
  if (!diag.gaussian) diag.flags.emplace_back(error_name(ErrorCode::NotGaussian));

  if (diag.stable && diag.gaussian) {
    const Matrix s = linalg::stationary_covariance(m.Q, m.drift_covariance());
    const double lam = linalg::smallest_eigenvalue_sym(s);
    diag.stationary_nonsingular = lam > linalg::kEigTol * std::max(1.0, s.norm());
    if (!diag.stationary_nonsingular) diag.flags.emplace_back(error_name(ErrorCode::SingularStationaryCovariance));
  }
  diag.gauss_flavors_applicable = diag.stable && diag.gaussian && diag.stationary_nonsingular;
  return diag;
}

namespace detail {

struct Fnv1a {
  std::uint64_t h = 14695981039346656037ull;
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= c[i];
      h *= 1099511628211ull;
    }
  }
  void f64(double v) { bytes(&v, sizeof v); }
  void i64(std::int64_t v) { bytes(&v, sizeof v); }
  template <typename Derived>
  void mat(const Eigen::MatrixBase<Derived>& m) {
    i64(m.rows());
    i64(m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) f64(m(i, j));
  }
};

}  // namespace detail

/// 64-bit FNV-1a over the model's numeric content, as 16 hex digits.
inline std::string model_digest(const StateSpaceModel& m) {
  detail::Fnv1a h;
  h.mat(m.Q);
  h.mat(m.Sigma);
  h.i64(static_cast<std::int64_t>(m.noise.family));
  h.mat(m.noise.location);
  h.mat(m.noise.base_cov);
  h.mat(m.noise.scale);
  h.f64(m.noise.dof);
  h.mat(m.noise.loading);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.h));
  return buf;
}

}  // namespace ergobound
