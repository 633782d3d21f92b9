// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>

#include "ergobound/errors.hpp"
#include "ergobound/linalg.hpp"

namespace ergobound {

inline constexpr long kExactBinomialLimit = 1000;

/// log C(t, j)
inline double log_binomial(long t, long j) {
  return std::lgamma(t + 1.0) - std::lgamma(j + 1.0) - std::lgamma(static_cast<double>(t - j) + 1.0);
}

/// C(t, j) by the multiplicative recurrence (t <= 1000) or through lgamma.
inline double binomial(long t, long j) {
  if (j < 0 || j > t) return 0.0;
  if (t > kExactBinomialLimit) return std::exp(log_binomial(t, j));
  j = std::min(j, t - j);
  double c = 1.0;
  for (long k = 1; k <= j; ++k) c = c * static_cast<double>(t - j + k) / static_cast<double>(k);
  return std::round(c) < 9007199254740992.0 ? std::round(c) : c;
}

/// C(t, j) / C(t, m) without forming either coefficient.
inline double binomial_ratio(long t, long j, long m) {
  if (j < 0 || j > t) return 0.0;
  double r = 1.0;
  if (j < m) {
    for (long k = j + 1; k <= m; ++k) r *= static_cast<double>(k) / static_cast<double>(t - k + 1);
  } else {
    for (long k = m + 1; k <= j; ++k) r *= static_cast<double>(t - k + 1) / static_cast<double>(k);
  }
  return r;
}

/// J_d(q)^t, (J^t)_{i,i+j} = C(t, j) q^{t-j}.
inline CMatrix jordan_power(Complex q, int d, long t) {
  require(d >= 1 && t >= 0, ErrorCode::InvalidArgument, "jordan_power needs d >= 1, t >= 0");
  CMatrix p = CMatrix::Zero(d, d);
  const double mod = std::abs(q), arg = std::arg(q);
  for (int j = 0; j < d && j <= t; ++j) {
    Complex v;
    if (t <= kExactBinomialLimit) {
      v = binomial(t, j) * std::pow(q, static_cast<double>(t - j));
      if (t - j == 0) v = binomial(t, j);
    } else if (mod == 0.0) {
      v = 0.0;
    } else {
      const double lm = log_binomial(t, j) + static_cast<double>(t - j) * std::log(mod);
      v = std::polar(std::exp(lm), static_cast<double>(t - j) * arg);
    }
    for (int i = 0; i + j < d; ++i) p(i, i + j) = v;
  }
  return p;
}

struct JordanEstimate {
  int j_star = 0;
  long threshold = 0;
  CVector scaled;
  CVector target;  // dominant coordinate on e_1
  double error = 0.0;
  double error_bound = 0.0;
  bool within_bound = false;
  CVector target_as_printed;  // dominant coordinate on e_{d-j*+1}
  double error_as_printed = 0.0;
  bool as_printed_within_bound = false;
};

namespace detail {

inline int last_nonzero(const Vector& x) {
  for (Eigen::Index j = x.size(); j >= 1; --j)
    if (std::abs(x(j - 1)) > 0.0) return static_cast<int>(j);
  return 0;
}

/// The square-root factor of the error bound for one block, scale index m (1-based).
inline double jordan_bound_root(double mod, const Vector& x, int m) {
  double first = 0.0;
  for (int j = 0; j <= m - 2; ++j) first += std::pow(mod, (m - 1) - j) * std::abs(x(j));
  double acc = first * first;
  for (int k = 2; k <= m; ++k) {
    double s = 0.0;
    for (int j = 0; j <= m - k; ++j) s += std::pow(mod, (m - 1) - j) * std::abs(x(j + k - 1));
    acc += s * s;
  }
  return std::sqrt(acc);
}

/// J^t x / (|q|^{t-(m-1)} C(t, m-1)) computed through binomial ratios.
inline CVector jordan_scaled(Complex q, const Vector& x, long t, int m) {
  const auto d = static_cast<int>(x.size());
  const double mod = std::abs(q), arg = std::arg(q);
  CVector out = CVector::Zero(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; i + j < d && j <= t; ++j) {
      if (x(i + j) == 0.0) continue;
      const double mag = binomial_ratio(t, j, m - 1) * std::pow(mod, static_cast<double>(m - 1 - j));
      out(i) += std::polar(mag, static_cast<double>(t - j) * arg) * x(i + j);
    }
  }
  return out;
}

}  // namespace detail

/// Leading-order behaviour of J_d(q)^t x with j* the last nonzero coordinate of x.
inline JordanEstimate jordan_estimate(Complex q, const Vector& x, long t) {
  require(std::abs(q) > 0.0, ErrorCode::ZeroEigenvalue, "eigenvalue must be nonzero");
  const auto d = static_cast<int>(x.size());
  require(d >= 1 && x.allFinite(), ErrorCode::InvalidArgument, "x must be finite and non-empty");
  JordanEstimate e;
  e.j_star = detail::last_nonzero(x);
  require(e.j_star > 0, ErrorCode::InvalidArgument, "x must be nonzero");
  const int js = e.j_star;
  e.threshold = std::max<long>(d - 1, 2L * (js - 2));
  require(t >= e.threshold, ErrorCode::OutOfRegime,
          "t = " + std::to_string(t) + " below regime threshold " + std::to_string(e.threshold));

  const double mod = std::abs(q), arg = std::arg(q);
  e.scaled = detail::jordan_scaled(q, x, t, js);
  const Complex lead = std::polar(x(js - 1), static_cast<double>(t - (js - 1)) * arg);
  e.target = CVector::Zero(d);
  e.target(0) = lead;
  e.target_as_printed = CVector::Zero(d);
  e.target_as_printed(d - js) = lead;
  e.error = (e.scaled - e.target).norm();
  e.error_as_printed = (e.scaled - e.target_as_printed).norm();
  e.error_bound = static_cast<double>(js - 1) / static_cast<double>(t - js + 2) * detail::jordan_bound_root(mod, x, js);
  const double slack = 1e-12 * std::max(1.0, e.error_bound);
  e.within_bound = e.error <= e.error_bound + slack;
  e.as_printed_within_bound = e.error_as_printed <= e.error_bound + slack;
  return e;
}

struct JordanPairEstimate {
  bool reduced = false;  // one half of x is zero: single-block estimate on the other half
  int j_plus = 0, j_minus = 0, j_star = 0;
  long threshold = 0;
  JordanEstimate corrected;   // scale j*, targets on e_1 / e_{N+1}, both halves in the bound
  JordanEstimate as_printed;  // scale j+, targets on e_{N-j*+1} / e_{2N-j*+1}, bound on x+
};

/// diag(J_N(q), J_N(conj q)) acting on x = (x+, x-).
inline JordanPairEstimate jordan_pair_estimate(Complex q, const Vector& x_plus, const Vector& x_minus, long t) {
  require(std::abs(q) > 0.0, ErrorCode::ZeroEigenvalue, "eigenvalue must be nonzero");
  require(x_plus.size() == x_minus.size() && x_plus.size() >= 1, ErrorCode::DimensionMismatch,
          "halves must have equal positive size");
  const auto n = static_cast<int>(x_plus.size());
  JordanPairEstimate p;
  p.j_plus = detail::last_nonzero(x_plus);
  p.j_minus = detail::last_nonzero(x_minus);
  require(p.j_plus > 0 || p.j_minus > 0, ErrorCode::InvalidArgument, "x must be nonzero");
  p.j_star = std::max(p.j_plus, p.j_minus);

  const auto embed = [n](const JordanEstimate& e, bool lower_half) {
    JordanEstimate out = e;
    out.scaled = CVector::Zero(2 * n);
    out.target = CVector::Zero(2 * n);
    out.target_as_printed = CVector::Zero(2 * n);
    const int off = lower_half ? n : 0;
    out.scaled.segment(off, n) = e.scaled;
    out.target.segment(off, n) = e.target;
    out.target_as_printed.segment(off, n) = e.target_as_printed;
    return out;
  };
  if (p.j_plus == 0 || p.j_minus == 0) {
    p.reduced = true;
    const bool minus = p.j_plus == 0;
    const JordanEstimate single = jordan_estimate(minus ? std::conj(q) : q, minus ? x_minus : x_plus, t);
    p.threshold = single.threshold;
    p.corrected = p.as_printed = embed(single, minus);
    return p;
  }

  const int d = 2 * n;
  p.threshold = std::max<long>(d - 1, 2L * (p.j_plus - 2));
  require(t >= p.threshold, ErrorCode::OutOfRegime,
          "t = " + std::to_string(t) + " below regime threshold " + std::to_string(p.threshold));
  const double mod = std::abs(q), arg = std::arg(q);
  const double phase = static_cast<double>(t - (p.j_star - 1)) * arg;

  const auto scaled_with = [&](int m) {
    CVector s(d);
    s.head(n) = detail::jordan_scaled(q, x_plus, t, m);
    s.tail(n) = detail::jordan_scaled(std::conj(q), x_minus, t, m);
    return s;
  };
  const auto targets = [&](int top, int bottom) {
    CVector g = CVector::Zero(d);
    if (p.j_star == p.j_plus) g(top) += std::polar(x_plus(p.j_star - 1), phase);
    if (p.j_star == p.j_minus) g(bottom) += std::polar(x_minus(p.j_star - 1), -phase);
    return g;
  };
  const auto finish = [&](JordanEstimate& e) {
    const double slack = 1e-12 * std::max(1.0, e.error_bound);
    e.error = (e.scaled - e.target).norm();
    e.error_as_printed = (e.scaled - e.target_as_printed).norm();
    e.within_bound = e.error <= e.error_bound + slack;
    e.as_printed_within_bound = e.error_as_printed <= e.error_bound + slack;
  };

  JordanEstimate& c = p.corrected;
  c.j_star = p.j_star;
  c.threshold = std::max<long>(n - 1, 2L * (p.j_star - 2));
  c.scaled = scaled_with(p.j_star);
  c.target = targets(0, n);
  c.target_as_printed = targets(n - p.j_star, d - p.j_star);
  const double sp = detail::jordan_bound_root(mod, x_plus, p.j_star);
  const double sm = detail::jordan_bound_root(mod, x_minus, p.j_star);
  c.error_bound = static_cast<double>(p.j_star - 1) / static_cast<double>(t - p.j_star + 2) * std::hypot(sp, sm);
  finish(c);

  JordanEstimate& a = p.as_printed;
  a.j_star = p.j_star;
  a.threshold = p.threshold;
  a.scaled = scaled_with(p.j_plus);
  a.target = targets(0, n);
  a.target_as_printed = targets(n - p.j_star, d - p.j_star);
  a.error_bound = static_cast<double>(p.j_plus - 1) / static_cast<double>(t - p.j_plus + 2) *
                  detail::jordan_bound_root(mod, x_plus, p.j_plus);
  finish(a);
  return p;
}

/// Eigen-coordinate sandwich lower <= |Q^t z| <= upper.
inline std::pair<double, double> lyapunov_sandwich(const linalg::SpectralInfo& spec, const Vector& z, long t) {
  require(spec.diagonalizable && spec.eigenvectors.has_value(), ErrorCode::NotDiagonalizable,
          "eigenvector matrix is missing or ill-conditioned");
  const CMatrix& u = *spec.eigenvectors;
  require(z.size() == u.rows(), ErrorCode::DimensionMismatch, "z has wrong size");
  const CMatrix uinv = u.inverse();
  const CVector w = uinv * z.cast<Complex>();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < w.size(); ++j)
    acc += std::pow(std::abs(spec.eigenvalues(j)), 2.0 * t) * std::norm(w(j));
  const double root = std::sqrt(acc);
  return {root / uinv.norm(), u.norm() * root};
}

}  // namespace ergobound
