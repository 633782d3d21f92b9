// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "ergobound/linalg.hpp"
#include "ergobound/model.hpp"

namespace ergobound {

enum class RegionLabel { diamond, wing, cohn, enestrom_kakeya, p3_sufficient, p4_sufficient };

inline std::string_view region_name(RegionLabel r) {
  switch (r) {
    case RegionLabel::diamond: return "diamond";
    case RegionLabel::wing: return "wing";
    case RegionLabel::cohn: return "cohn";
    case RegionLabel::enestrom_kakeya: return "enestrom_kakeya";
    case RegionLabel::p3_sufficient: return "p3_sufficient";
    case RegionLabel::p4_sufficient: return "p4_sufficient";
  }
  return "unknown";
}

struct StabilityVerdict {
  bool stable = false;
  double spectral_radius = 0.0;
  double margin = 0.0;  // 1 - rho
  std::optional<RegionLabel> region_label;
  bool boundary = false;
};

inline constexpr double kBoundaryTol = 1e-9;
inline constexpr double kClampTol = 1e-12;

inline StabilityVerdict verdict_from_radius(double rho, double boundary_tol) {
  StabilityVerdict v;
  v.spectral_radius = rho;
  v.margin = 1.0 - rho;
  v.boundary = std::abs(rho - 1.0) <= boundary_tol;
  v.stable = rho < 1.0 - boundary_tol;
  return v;
}

inline StabilityVerdict is_schur_stable(const Matrix& q, double boundary_tol = kBoundaryTol) {
  return verdict_from_radius(linalg::eigen(q).spectral_radius, boundary_tol);
}

enum class Ar2Region { diamond, wing, unstable, boundary };

inline std::string_view ar2_region_name(Ar2Region r) {
  switch (r) {
    case Ar2Region::diamond: return "diamond";
    case Ar2Region::wing: return "wing";
    case Ar2Region::unstable: return "unstable";
    case Ar2Region::boundary: return "boundary";
  }
  return "unknown";
}

/// Largest root modulus of z^2 - phi1 z - phi2.
inline double ar2_root_modulus(double phi1, double phi2) {
  const double disc = phi1 * phi1 + 4.0 * phi2;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    // Stable evaluation of both real roots.
    const double big = 0.5 * (phi1 + std::copysign(s, phi1));
    const double small = big != 0.0 ? -phi2 / big : 0.0;
    return std::max(std::abs(big), std::abs(small));
  }
  return std::sqrt(-phi2);
}

namespace detail {

inline double clamped_acos(double v) {
  if (v > 1.0 && v <= 1.0 + kClampTol) v = 1.0;
  if (v < -1.0 && v >= -1.0 - kClampTol) v = -1.0;
  return std::acos(v);  // NaN outside the clamp band; comparisons then fail
}

}  // namespace detail

inline bool ar2_in_diamond(double phi1, double phi2) { return std::abs(phi1) + std::abs(phi2) < 1.0; }

inline bool ar2_in_wing(double phi1, double phi2) {
  const double a1 = std::abs(phi1), a2 = std::abs(phi2);
  if (!(a1 + a2 >= 1.0)) return false;
  if (!(a1 - 1.0 < a2 && a2 < 1.0)) return false;
  if (!(phi1 * phi1 * phi2 < 0.0)) return false;
  const double t1 = detail::clamped_acos((1.0 + phi1 * phi1 - phi2 * phi2) / (2.0 * a1));
  const double t2 = detail::clamped_acos((1.0 - phi1 * phi1 + phi2 * phi2) / (2.0 * a2));
  return 2.0 * t1 + t2 < std::numbers::pi;
}

inline Ar2Region ar2_region(double phi1, double phi2, double boundary_tol = kBoundaryTol) {
  if (std::abs(ar2_root_modulus(phi1, phi2) - 1.0) <= boundary_tol) return Ar2Region::boundary;
  if (ar2_in_diamond(phi1, phi2)) return Ar2Region::diamond;
  if (ar2_in_wing(phi1, phi2)) return Ar2Region::wing;
  return Ar2Region::unstable;
}

struct SufficientFlags {
  bool enestrom_kakeya = false;
  bool cohn = false;
  bool p3_sufficient = false;
  bool p4_sufficient = false;

  bool any() const { return enestrom_kakeya || cohn || p3_sufficient || p4_sufficient; }
};

inline SufficientFlags sufficient_tests(const std::vector<double>& phi) {
  SufficientFlags f;
  const std::size_t p = phi.size();
  if (p == 0) return f;

  f.enestrom_kakeya = phi.front() > -1.0 && phi.back() < 0.0;
  for (std::size_t j = 1; j < p && f.enestrom_kakeya; ++j) f.enestrom_kakeya = phi[j - 1] < phi[j];

  double s = 0.0;
  for (double v : phi) s += std::abs(v);
  f.cohn = s < 1.0;

  if (p == 3) {
    const double a = phi[0], b = phi[1], c = phi[2];
    f.p3_sufficient = std::abs(a + b * c) + std::abs(b + a * c) < 1.0 - c * c;
  }
  if (p == 4 && phi[1] == 0.0) {
    const double a = phi[0], c = phi[2], e = phi[3];
    f.p4_sufficient = std::abs(a + c * e) + std::abs(c + a * e) < 1.0 - e * e;
  }
  return f;
}

/// Eigenvalue verdict for an AR(p) polynomial plus the first closed-form label that applies.
inline StabilityVerdict ar_stability(const std::vector<double>& phi, double boundary_tol = kBoundaryTol) {
  StabilityVerdict v = is_schur_stable(companion(phi), boundary_tol);
  if (phi.size() == 2) {
    if (ar2_in_diamond(phi[0], phi[1])) v.region_label = RegionLabel::diamond;
    else if (ar2_in_wing(phi[0], phi[1])) v.region_label = RegionLabel::wing;
    return v;
  }
  const SufficientFlags f = sufficient_tests(phi);
  if (f.cohn) v.region_label = RegionLabel::cohn;
  else if (f.enestrom_kakeya) v.region_label = RegionLabel::enestrom_kakeya;
  else if (f.p3_sufficient) v.region_label = RegionLabel::p3_sufficient;
  else if (f.p4_sufficient) v.region_label = RegionLabel::p4_sufficient;
  return v;
}

}  // namespace ergobound
