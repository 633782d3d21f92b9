// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergobound/asymptotics.hpp"
#include "ergobound/errors.hpp"
#include "ergobound/linalg.hpp"
#include "ergobound/model.hpp"
#include "ergobound/moments.hpp"
#include "ergobound/wasserstein.hpp"

namespace ergobound {

enum class Flavor {
  exact_ar1,
  gauss_affine,
  projected,
  sliced_gauss,
  generic,
  generic_diag,
  sliced_generic,
  parallel,
  empirical_mean
};

inline std::string_view flavor_name(Flavor f) {
  switch (f) {
    case Flavor::exact_ar1: return "exact_ar1";
    case Flavor::gauss_affine: return "gauss_affine";
    case Flavor::projected: return "projected";
    case Flavor::sliced_gauss: return "sliced_gauss";
    case Flavor::generic: return "generic";
    case Flavor::generic_diag: return "generic_diag";
    case Flavor::sliced_generic: return "sliced_generic";
    case Flavor::parallel: return "parallel";
    case Flavor::empirical_mean: return "empirical_mean";
  }
  return "unknown";
}

inline Flavor parse_flavor(std::string_view s) {
  for (auto f : {Flavor::exact_ar1, Flavor::gauss_affine, Flavor::projected, Flavor::sliced_gauss, Flavor::generic,
                 Flavor::generic_diag, Flavor::sliced_generic, Flavor::parallel, Flavor::empirical_mean}) {
    if (flavor_name(f) == s) return f;
  }
  fail(ErrorCode::InvalidArgument, "unknown flavor '" + std::string(s) + "'");
}

struct BoundConstants {
  double K_d = std::numeric_limits<double>::quiet_NaN();
  double C_star = std::numeric_limits<double>::quiet_NaN();
  double star = std::numeric_limits<double>::quiet_NaN();  // ||Q||_*, or rho(Q) for generic_diag
  double lambda_minus = std::numeric_limits<double>::quiet_NaN();
  double kappa = std::numeric_limits<double>::quiet_NaN();
};

struct ChainMember {
  std::string name;
  double value;
};

struct BoundReport {
  long t = 0;
  Flavor flavor = Flavor::generic;
  double order = 1.0;
  double lower = 0.0;
  double upper = 0.0;
  double mean_part = 0.0;
  double noise_part = 0.0;
  BoundConstants constants;
  std::vector<ChainMember> chain;  // every displayed upper bound, upper = min over the eligible ones
  bool sandwich_consistent = true;  // lower <= upper
  bool t_zero = false;              // statements are for t >= 1; t = 0 values are formula evaluations
  double moment_std_error = 0.0;    // Monte Carlo noise in E|Sigma xi|^p, folded into upper
  std::optional<double> tensorized_w2;

  void finish() {
    sandwich_consistent = lower <= upper;
    t_zero = t == 0;
  }
};

// ---------------------------------------------------------------------------
// Closed-form constants
// ---------------------------------------------------------------------------

/// (E|N_d|^r)^{1/r} for a standard Gaussian vector in R^d.
inline double gaussian_abs_moment(int d, double r) {
  require(d >= 1 && r >= 1.0, ErrorCode::InvalidArgument, "gaussian_abs_moment needs d >= 1, r >= 1");
  const double log_m = 0.5 * r * std::numbers::ln2 + std::lgamma(0.5 * (d + r)) - std::lgamma(0.5 * d);
  return std::exp(log_m / r);
}

/// E|v_1|^r for v uniform on the unit sphere of R^d.
inline double sphere_moment_ratio(int d, double r) {
  require(d >= 2 && r >= 1.0, ErrorCode::InvalidArgument, "sphere_moment_ratio needs d >= 2, r >= 1");
  return std::exp(std::lgamma(0.5 * (r + 1.0)) + std::lgamma(0.5 * d) - std::lgamma(0.5 * (r + d))) /
         std::sqrt(std::numbers::pi);
}

struct SlicedConstants {
  int d;
  double r;
  double surface_area;
  double moment_ratio;
  double gaussian_abs_moment;
};

inline SlicedConstants sliced_constants(int d, double r) {
  return {d, r, sphere_area(d), sphere_moment_ratio(d, r), gaussian_abs_moment(d, r)};
}

// ---------------------------------------------------------------------------
// Gaussian laws of X_t(x) and X_inf
// ---------------------------------------------------------------------------

inline void require_gaussian(const StateSpaceModel& m) {
  require(m.noise.family == NoiseFamily::gaussian, ErrorCode::NotGaussian,
          "flavor needs gaussian noise, got " + std::string(family_name(m.noise.family)));
}

inline void require_star_for(const StateSpaceModel& m, const linalg::StarNorm& star) {
  require(star.dim() == m.dim(), ErrorCode::DimensionMismatch, "star norm built for another dimension");
  require(star.value < 1.0, ErrorCode::NotSchurStable, "||Q||_* is not below one");
}

/// Laws of B X_t(x) and B X_inf. Sigma_t is the finite sum, Sigma_inf the doubling solve.
inline std::pair<GaussianLaw, GaussianLaw> gaussian_laws(const StateSpaceModel& m, const Matrix& b, const Vector& x,
                                                         long t) {
  require_gaussian(m);
  check_model_shapes(m);
  require(b.cols() == m.dim() && x.size() == m.dim(), ErrorCode::DimensionMismatch, "B or x has wrong size");
  require(t >= 0, ErrorCode::InvalidArgument, "t must be >= 0");
  const Eigen::Index d = m.dim();
  const Vector drift = m.drift_mean();
  const Matrix v = m.drift_covariance();

  Vector mean_t = Vector::Zero(d);
  Matrix cov_t = Matrix::Zero(d, d);
  Matrix qj = Matrix::Identity(d, d);
  for (long j = 0; j < t; ++j) {
    mean_t += qj * drift;
    cov_t += qj * v * qj.transpose();
    qj = m.Q * qj;
  }
  mean_t += qj * x;

  const Matrix s_inf = linalg::stationary_covariance(m.Q, v);
  GaussianLaw at{b * mean_t, linalg::symmetrized(b * cov_t * b.transpose())};
  GaussianLaw inf{b * m.stationary_mean(), linalg::symmetrized(b * s_inf * b.transpose())};
  return {at, inf};
}

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

/// Exact W_2 for the scalar Gaussian AR(1) started at x.
inline double exact_w2_ar1(double q, double sigma, double x, long t) {
  require(std::abs(q) < 1.0, ErrorCode::NotSchurStable, "|q| must be below one");
  require(sigma != 0.0 && std::isfinite(sigma), ErrorCode::InvalidArgument, "sigma must be nonzero");
  require(t >= 0, ErrorCode::InvalidArgument, "t must be >= 0");
  const double q2t = std::pow(q * q, static_cast<double>(t));
  const double denom = std::sqrt(1.0 - q2t) + 1.0;
  return std::sqrt(q2t * x * x + sigma * sigma / (1.0 - q * q) * q2t * q2t / (denom * denom));
}

/// Mean component q^t |x| and noise component of the exact AR(1) distance.
inline std::pair<double, double> exact_ar1_parts(double q, double sigma, double x, long t) {
  const double qt = std::pow(std::abs(q), static_cast<double>(t));
  const double q2t = qt * qt;
  const double noise = std::abs(sigma) / std::sqrt(1.0 - q * q) * q2t / (std::sqrt(1.0 - q2t) + 1.0);
  return {qt * std::abs(x), noise};
}

/// Square-root Lipschitz constant used for the covariance term.
///
/// sqrt_lambda: ||sqrt(A) - sqrt(B)||_F <= ||A - B||_F / sqrt(lambda_min(B)), valid for any PSD A.
/// as_printed: the 1/lambda_- constant. Not a valid bound in general; kept for comparison.
enum class HemmenAndo { sqrt_lambda, as_printed };

inline BoundReport gaussian_affine_bounds(const StateSpaceModel& m, const Matrix& b, const Vector& x, double r, long t,
                                          const linalg::StarNorm& star, HemmenAndo ha = HemmenAndo::sqrt_lambda) {
  require_gaussian(m);
  require_star_for(m, star);
  require(r >= 1.0, ErrorCode::InvalidArgument, "order r must be >= 1");
  require(t >= 0, ErrorCode::InvalidArgument, "t must be >= 0");
  require(b.cols() == m.dim() && x.size() == m.dim(), ErrorCode::DimensionMismatch, "B or x has wrong size");

  const Matrix s_inf = linalg::symmetrized(b * linalg::stationary_covariance(m.Q, m.drift_covariance()) * b.transpose());
  const double lam = linalg::smallest_eigenvalue_sym(s_inf);
  require(lam > linalg::kEigTol * std::max(1.0, s_inf.norm()), ErrorCode::SingularStationaryCovariance,
          "smallest eigenvalue of the stationary covariance is " + std::to_string(lam));

  const Vector mu = x - m.stationary_mean();
  const double s = star.value;
  BoundReport rep;
  rep.t = t;
  rep.flavor = Flavor::gauss_affine;
  rep.order = r;
  rep.lower = (b * linalg::matrix_power(m.Q, t) * mu).norm();
  const double base = star.C_star * star.C_star * b.squaredNorm() * m.Sigma.squaredNorm() *
                      m.noise.covariance().norm() * std::pow(s, 2.0 * t) / (1.0 - s * s) *
                      gaussian_abs_moment(static_cast<int>(b.rows()), r);
  const double sqrt_form = base / std::sqrt(lam);
  const double printed_form = base / lam;
  rep.chain = {{"sqrt_lambda", rep.lower + sqrt_form}, {"as_printed", rep.lower + printed_form}};
  rep.mean_part = rep.lower;
  rep.noise_part = ha == HemmenAndo::sqrt_lambda ? sqrt_form : printed_form;
  rep.upper = rep.mean_part + rep.noise_part;
  rep.constants = {star.K_d, star.C_star, s, lam, star.kappa};
  rep.finish();
  return rep;
}

/// (E|N_1|^r)^{1/r}
inline double normal_moment_root(double r) {
  return std::numbers::sqrt2 * std::exp(std::lgamma(0.5 * (r + 1.0)) / r) / std::pow(std::numbers::pi, 0.5 / r);
}

inline BoundReport projected_bounds(const StateSpaceModel& m, const Vector& v, const Vector& x, double r, long t,
                                    const linalg::StarNorm& star) {
  require_gaussian(m);
  require_star_for(m, star);
  require(r >= 1.0 && t >= 0, ErrorCode::InvalidArgument, "need r >= 1, t >= 0");
  require(v.size() == m.dim(), ErrorCode::DimensionMismatch, "v has wrong size");
  require(std::abs(v.norm() - 1.0) <= 1e-12, ErrorCode::InvalidArgument, "v must be a unit vector");

  const auto [at, inf] = gaussian_laws(m, Matrix::Identity(m.dim(), m.dim()), x, t);
  const double lam = linalg::smallest_eigenvalue_sym(inf.covariance);
  require(lam > linalg::kEigTol * std::max(1.0, inf.covariance.norm()), ErrorCode::SingularStationaryCovariance,
          "smallest eigenvalue of the stationary covariance is " + std::to_string(lam));

  const double s = star.value;
  const double g = normal_moment_root(r);
  const double common = star.C_star * star.C_star * m.Sigma.squaredNorm() * m.noise.covariance().norm() *
                        std::pow(s, 2.0 * t) / (1.0 - s * s) * g;
  const double vt = v.dot(at.covariance * v), vi = v.dot(inf.covariance * v);

  BoundReport rep;
  rep.t = t;
  rep.flavor = Flavor::projected;
  rep.order = r;
  rep.lower = std::abs(v.dot(linalg::matrix_power(m.Q, t) * (x - m.stationary_mean())));
  const double middle = common * v.squaredNorm() / std::sqrt(vt + vi);
  const double final_form = common * v.norm() / std::sqrt(lam);
  const double std_gap = std::abs(std::sqrt(vt) - std::sqrt(vi)) * g;
  rep.chain = {{"std_gap", rep.lower + std_gap}, {"middle", rep.lower + middle}, {"final", rep.lower + final_form}};
  rep.mean_part = rep.lower;
  rep.noise_part = std::min(middle, final_form);
  rep.upper = rep.mean_part + rep.noise_part;
  rep.constants = {star.K_d, star.C_star, s, lam, star.kappa};
  rep.finish();
  return rep;
}

enum class SlicedMode { as_printed, jensen_consistent };

inline BoundReport sliced_gauss_bounds(const StateSpaceModel& m, const Vector& x, double r, long t,
                                       const linalg::StarNorm& star, SlicedMode mode = SlicedMode::jensen_consistent) {
  require_gaussian(m);
  require_star_for(m, star);
  const int d = static_cast<int>(m.dim());
  require(d >= 2, ErrorCode::InvalidArgument, "sliced bounds need d >= 2");
  require(r >= 1.0 && t >= 0, ErrorCode::InvalidArgument, "need r >= 1, t >= 0");

  const Matrix s_inf = linalg::stationary_covariance(m.Q, m.drift_covariance());
  const double lam = linalg::smallest_eigenvalue_sym(s_inf);
  require(lam > linalg::kEigTol * std::max(1.0, s_inf.norm()), ErrorCode::SingularStationaryCovariance,
          "smallest eigenvalue of the stationary covariance is " + std::to_string(lam));

  const double ct = sphere_moment_ratio(d, r);
  const double mean_const = mode == SlicedMode::as_printed ? ct : std::pow(ct, 1.0 / r);
  const double s = star.value;
  BoundReport rep;
  rep.t = t;
  rep.flavor = Flavor::sliced_gauss;
  rep.order = r;
  rep.lower = mean_const * (linalg::matrix_power(m.Q, t) * (x - m.stationary_mean())).norm();
  rep.mean_part = rep.lower;
  rep.noise_part = star.C_star * star.C_star / (1.0 - s * s) * m.Sigma.squaredNorm() * m.noise.covariance().norm() /
                   std::sqrt(lam) * normal_moment_root(r) * std::pow(s, 2.0 * t);
  rep.upper = rep.mean_part + rep.noise_part;
  rep.chain = {{"final", rep.upper}};
  rep.constants = {star.K_d, star.C_star, s, lam, star.kappa};
  rep.finish();
  return rep;
}

namespace detail {

struct GenericPieces {
  double lower, qtx, a_mean, a_noise, b_noise, a_noise_printed, b_noise_printed, moment_se;
};

/// Mean norm and centred root second moment of the driving term, for the p = 2 split.
struct SecondMomentSplit {
  double mean_norm;
  double centred_rms;
};

inline SecondMomentSplit second_moment_split(const StateSpaceModel& m) {
  return {m.drift_mean().norm(), std::sqrt(std::max(m.drift_covariance().trace(), 0.0))};
}

/// Shared pieces of the coupling bounds; `k` and `s` are the norm constant and contraction rate.
///
/// The tail of X_inf = sum_{j>=0} Q^j Sigma xi_j beyond t starts at j = t, so the valid forms carry
/// s^t. Minkowski gives (E|tail|^p)^{1/p} <= k s^t (E|Sigma xi|^p)^{1/p} / (1 - s); for p = 2 the
/// mean and the centred part separate and the centred terms are orthogonal. The `printed` pieces
/// keep s^{t+1} and the sum of p-th moments; they are not bounds in general.
inline GenericPieces generic_pieces(const StateSpaceModel& m, const Vector& x, double p, long t, double k, double s,
                                    const MomentEstimate& mp, const MomentEstimate& m1,
                                    std::optional<SecondMomentSplit> split = std::nullopt) {
  const Matrix qt = linalg::matrix_power(m.Q, t);
  GenericPieces g{};
  g.lower = (qt * (x - m.stationary_mean())).norm();
  g.qtx = (qt * x).norm();
  const double st = std::pow(s, static_cast<double>(t));
  g.a_mean = k * st * x.norm();
  g.a_noise = k * st * k * m1.value / (1.0 - s);
  g.a_noise_printed = g.a_noise * s;
  g.b_noise = k * st * mp.value / (1.0 - s);
  if (p == 2.0) {
    if (!split) split = second_moment_split(m);
    const double mean_term = split->mean_norm / (1.0 - s);
    g.b_noise = std::min(g.b_noise, k * st * std::hypot(mean_term, split->centred_rms / std::sqrt(1.0 - s * s)));
  }
  g.b_noise_printed = k * mp.value * st * s / std::pow(1.0 - std::pow(s, p), 1.0 / p);
  g.moment_se = mp.std_error;
  return g;
}

/// Bound (a) bounds E|Q^t(x - X_inf)|, an order-one coupling cost, so it enters the minimum only for p = 1.
inline void assemble_generic(BoundReport& rep, const GenericPieces& g, double p, double mean_scale = 1.0) {
  const double a = mean_scale * (g.a_mean + g.a_noise);
  const double b = mean_scale * g.qtx + g.b_noise;
  rep.chain = {{"coupling_a", a},
               {"minkowski_b", b},
               {"coupling_a_as_printed", mean_scale * (g.a_mean + g.a_noise_printed)},
               {"minkowski_b_as_printed", mean_scale * g.qtx + g.b_noise_printed}};
  if (p == 1.0 && a < b) {
    rep.mean_part = mean_scale * g.a_mean;
    rep.noise_part = mean_scale * g.a_noise;
  } else {
    rep.mean_part = mean_scale * g.qtx;
    rep.noise_part = g.b_noise;
  }
  rep.upper = rep.mean_part + rep.noise_part;
  rep.moment_std_error = g.moment_se;
}

}  // namespace detail

inline BoundReport generic_bounds(const StateSpaceModel& m, const Vector& x, double p, long t,
                                  const linalg::StarNorm& star, NoiseMoments& moments) {
  require_star_for(m, star);
  require(p >= 1.0 && t >= 0, ErrorCode::InvalidArgument, "need p >= 1, t >= 0");
  require(x.size() == m.dim(), ErrorCode::DimensionMismatch, "x has wrong size");
  const MomentEstimate& mp = moments.get(p);
  const MomentEstimate& m1 = moments.get(1.0);
  const auto g = detail::generic_pieces(m, x, p, t, star.K_d, star.value, mp, m1);

  BoundReport rep;
  rep.t = t;
  rep.flavor = Flavor::generic;
  rep.order = p;
  rep.lower = g.lower;
  detail::assemble_generic(rep, g, p);
  rep.constants = {star.K_d, star.C_star, star.value, std::numeric_limits<double>::quiet_NaN(), star.kappa};
  rep.finish();
  return rep;
}

inline BoundReport generic_bounds(const StateSpaceModel& m, const Vector& x, double p, long t,
                                  const linalg::StarNorm& star) {
  NoiseMoments moments(m);
  return generic_bounds(m, x, p, t, star, moments);
}

inline BoundReport diagonalizable_bounds(const StateSpaceModel& m, const Vector& x, double p, long t,
                                         const linalg::SpectralInfo& spec, NoiseMoments& moments) {
  require(spec.diagonalizable && spec.eigenvectors.has_value(), ErrorCode::NotDiagonalizable,
          "Q is not diagonalizable within the condition cap");
  require(spec.spectral_radius < 1.0, ErrorCode::NotSchurStable, "rho(Q) must be below one");
  require(p >= 1.0 && t >= 0, ErrorCode::InvalidArgument, "need p >= 1, t >= 0");
  require(x.size() == m.dim(), ErrorCode::DimensionMismatch, "x has wrong size");

  const CMatrix& u = *spec.eigenvectors;
  const double k = u.norm() * u.inverse().norm();  // |Q^j z| <= k rho^j |z|
  const double rho = spec.spectral_radius;
  const MomentEstimate& mp = moments.get(p);
  const MomentEstimate& m1 = moments.get(1.0);
  auto g = detail::generic_pieces(m, x, p, t, k, rho, mp, m1);
  // Mean terms through the eigen-coordinate sandwich instead of k rho^t.
  g.lower = lyapunov_sandwich(spec, x - m.stationary_mean(), t).first;
  g.qtx = lyapunov_sandwich(spec, x, t).second;

  BoundReport rep;
  rep.t = t;
  rep.flavor = Flavor::generic_diag;
  rep.order = p;
  rep.lower = g.lower;
  detail::assemble_generic(rep, g, p);
  rep.constants = {k, std::numeric_limits<double>::quiet_NaN(), rho, std::numeric_limits<double>::quiet_NaN(),
                   std::numeric_limits<double>::quiet_NaN()};
  rep.finish();
  return rep;
}

inline BoundReport sliced_generic_bounds(const StateSpaceModel& m, const Vector& x, double p, long t,
                                         const linalg::StarNorm& star, NoiseMoments& moments,
                                         SlicedMode mode = SlicedMode::as_printed) {
  require_star_for(m, star);
  const int d = static_cast<int>(m.dim());
  require(d >= 2, ErrorCode::InvalidArgument, "sliced bounds need d >= 2");
  require(p >= 1.0 && t >= 0, ErrorCode::InvalidArgument, "need p >= 1, t >= 0");
  const MomentEstimate& mp = moments.get(p);
  const MomentEstimate& m1 = moments.get(1.0);
  const auto g = detail::generic_pieces(m, x, p, t, star.K_d, star.value, mp, m1);

  const double c1 = sphere_moment_ratio(d, 1.0);
  const double mean_const = mode == SlicedMode::as_printed ? c1 : std::pow(sphere_moment_ratio(d, p), 1.0 / p);
  BoundReport rep;
  rep.t = t;
  rep.flavor = Flavor::sliced_generic;
  rep.order = p;
  rep.lower = c1 * g.lower;
  detail::assemble_generic(rep, g, p, mean_const);
  rep.constants = {star.K_d, star.C_star, star.value, std::numeric_limits<double>::quiet_NaN(), star.kappa};
  rep.finish();
  return rep;
}

inline double tensorized_w2(const std::vector<double>& per_copy) {
  double acc = 0.0;
  for (double w : per_copy) acc += w * w;
  return std::sqrt(acc);
}

/// n i.i.d. copies: bounds scale by sqrt(n); for p = 2 an exact per-copy W_2 tensorizes.
inline BoundReport parallel_bounds(const BoundReport& per_copy, long n, double p,
                                   std::optional<double> per_copy_exact_w2 = std::nullopt) {
  require(n >= 1, ErrorCode::InvalidArgument, "need at least one copy");
  if (n == 1) {
    BoundReport same = per_copy;
    if (p == 2.0 && per_copy_exact_w2) same.tensorized_w2 = *per_copy_exact_w2;
    return same;
  }
  const double f = std::sqrt(static_cast<double>(n));
  BoundReport rep = per_copy;
  rep.flavor = Flavor::parallel;
  rep.order = p;
  rep.lower = f * per_copy.lower;
  rep.upper = f * per_copy.upper;
  rep.mean_part = f * per_copy.mean_part;
  rep.noise_part = f * per_copy.noise_part;
  for (auto& c : rep.chain) c.value *= f;
  if (p == 2.0 && per_copy_exact_w2) rep.tensorized_w2 = tensorized_w2(std::vector<double>(n, *per_copy_exact_w2));
  rep.finish();
  return rep;
}

inline BoundReport empirical_mean_bounds(const StateSpaceModel& m, long n, const Vector& x, double p, long t,
                                         const linalg::StarNorm& star, NoiseMoments& moments) {
  require(n >= 1, ErrorCode::InvalidArgument, "need n >= 1");
  if (n == 1) {
    BoundReport rep = generic_bounds(m, x, p, t, star, moments);
    rep.flavor = Flavor::empirical_mean;
    return rep;
  }
  require_star_for(m, star);
  require(p >= 1.0 && t >= 0, ErrorCode::InvalidArgument, "need p >= 1, t >= 0");

  // Minkowski majorant: (E|Sigma zeta|^p)^{1/p} <= ||Sigma||_F (E|xi|^p)^{1/p}, uniformly in n.
  StateSpaceModel raw = m;
  raw.Sigma = Matrix::Identity(m.dim(), m.dim());
  MomentEstimate mp = noise_abs_moment(raw, p);
  MomentEstimate m1 = noise_abs_moment(raw, 1.0);
  const double sf = m.Sigma.norm();
  mp.value *= sf;
  m1.value *= sf;
  // E[zeta] = E[xi], and the centred part obeys the same n-free majorant.
  const detail::SecondMomentSplit split{m.drift_mean().norm(),
                                        sf * std::sqrt(std::max(m.noise.covariance().trace(), 0.0))};
  const auto g = detail::generic_pieces(m, x, p, t, star.K_d, star.value, mp, m1, split);

  BoundReport rep;
  rep.t = t;
  rep.flavor = Flavor::empirical_mean;
  rep.order = p;
  rep.lower = g.lower;
  detail::assemble_generic(rep, g, p);

  if (m.noise.family == NoiseFamily::gaussian) {
    // zeta^(n) is Gaussian with covariance Xi / n; its exact moment gives a sharper bound.
    StateSpaceModel avg = m;
    avg.noise.base_cov = m.noise.base_cov / static_cast<double>(n);
    NoiseMoments am(avg);
    const BoundReport exact_n = generic_bounds(avg, x, p, t, star, am);
    rep.chain.push_back({"gaussian_per_n", exact_n.upper});
  }
  rep.constants = {star.K_d, star.C_star, star.value, std::numeric_limits<double>::quiet_NaN(), star.kappa};
  rep.finish();
  return rep;
}

/// W_2(X, R X + v) for Gaussian X and symmetric PSD R (R is then the Brenier map).
inline double chafai_w2_affine(const GaussianLaw& x_law, const Matrix& r, const Vector& v) {
  linalg::psd_sqrt(r);  // validates symmetric PSD
  require(r.rows() == x_law.covariance.rows() && v.size() == x_law.mean.size(), ErrorCode::DimensionMismatch,
          "R or v has wrong size");
  const Matrix& c = x_law.covariance;
  const double tr = (c + r * c * r.transpose() - 2.0 * r * c).trace();
  const Eigen::Index d = c.rows();
  const Vector shift = v + (r - Matrix::Identity(d, d)) * x_law.mean;
  return std::sqrt(std::max(tr, 0.0) + shift.squaredNorm());
}

}  // namespace ergobound
