// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>

#include "ergobound/errors.hpp"
#include "ergobound/linalg.hpp"
#include "ergobound/model.hpp"
#include "ergobound/rng.hpp"
#include "ergobound/wasserstein.hpp"

namespace ergobound {

/// (E|Sigma xi_1|^p)^{1/p}. Monte Carlo values carry a +3 standard error envelope in `value`.
struct MomentEstimate {
  double value = 0.0;
  double point = 0.0;      // estimate without the envelope
  double std_error = 0.0;  // of E|.|^p, zero for closed forms
  bool closed_form = true;
  std::size_t n_draws = 0;
};

inline constexpr std::size_t kMomentDraws = 1'000'000;
inline constexpr std::uint64_t kMomentSeed = 0x5eed0001ull;

/// Draw one base noise vector eta.
inline void draw_base(const NoiseSpec& n, CounterStream& s, const Matrix& chol, Vector& eta) {
  const Eigen::Index k = n.base_dim();
  switch (n.family) {
    case NoiseFamily::gaussian:
      for (Eigen::Index i = 0; i < k; ++i) eta(i) = s.normal();
      eta = n.location + chol * eta;
      return;
    case NoiseFamily::laplace:
      for (Eigen::Index i = 0; i < k; ++i) eta(i) = s.laplace(n.location(i), n.scale(i));
      return;
    case NoiseFamily::student_t:
      for (Eigen::Index i = 0; i < k; ++i) eta(i) = n.location(i) + s.student_t(n.dof, n.scale(i));
      return;
    case NoiseFamily::uniform:
      for (Eigen::Index i = 0; i < k; ++i) eta(i) = s.uniform(n.location(i), n.scale(i));
      return;
    case NoiseFamily::point_mass:
      eta = n.location;
      return;
  }
}

/// Factor L with L L^T = base covariance (Gaussian only; identity otherwise).
inline Matrix base_factor(const NoiseSpec& n) {
  if (n.family != NoiseFamily::gaussian) return Matrix::Identity(n.base_dim(), n.base_dim());
  return linalg::psd_sqrt(n.base_cov);
}

namespace detail {

/// E|eta|^p for a scalar base coordinate when a closed form exists; negative otherwise.
inline double scalar_abs_moment(const NoiseSpec& n, double p) {
  const double loc = n.location(0);
  switch (n.family) {
    case NoiseFamily::gaussian: {
      const double s = std::sqrt(std::max(n.base_cov(0, 0), 0.0));
      if (s == 0.0) return std::pow(std::abs(loc), p);
      return std::pow(s, p) * normal_abs_moment(loc / s, p);
    }
    case NoiseFamily::laplace:
      if (loc != 0.0) return -1.0;
      return std::pow(n.scale(0), p) * std::tgamma(p + 1.0);
    case NoiseFamily::student_t: {
      if (loc != 0.0) return -1.0;
      const double nu = n.dof;
      return std::pow(n.scale(0), p) * std::pow(nu, 0.5 * p) *
             std::exp(std::lgamma(0.5 * (p + 1.0)) + std::lgamma(0.5 * (nu - p)) - std::lgamma(0.5 * nu)) /
             std::sqrt(std::numbers::pi);
    }
    case NoiseFamily::uniform: {
      const double h = n.scale(0);
      auto f = [p](double u) { return std::copysign(std::pow(std::abs(u), p + 1.0), u) / (p + 1.0); };
      return (f(loc + h) - f(loc - h)) / (2.0 * h);
    }
    case NoiseFamily::point_mass: return std::pow(std::abs(loc), p);
  }
  return -1.0;
}

}  // namespace detail

inline MomentEstimate noise_abs_moment(const StateSpaceModel& m, double p, std::uint64_t seed = kMomentSeed,
                                       std::size_t draws = kMomentDraws) {
  require(p >= 1.0, ErrorCode::InvalidArgument, "moment order must be >= 1");
  require(m.noise.moment_available(p), ErrorCode::MomentUnavailable,
          "E|xi|^" + std::to_string(p) + " is infinite (r_max = " + std::to_string(m.noise.r_max()) + ")");
  const NoiseSpec& n = m.noise;
  const Matrix a = m.Sigma * n.loading;
  MomentEstimate est;

  if (n.family == NoiseFamily::point_mass) {
    est.value = est.point = (a * n.location).norm();
    return est;
  }
  if (n.base_dim() == 1) {
    const double s = detail::scalar_abs_moment(n, p);
    if (s >= 0.0) {
      est.value = est.point = a.col(0).norm() * std::pow(s, 1.0 / p);
      return est;
    }
  }
  if (n.family == NoiseFamily::gaussian) {
    const Vector mu = a * n.location;
    const Matrix c = linalg::symmetrized(a * n.base_cov * a.transpose());
    if (p == 2.0) {
      est.value = est.point = std::sqrt(c.trace() + mu.squaredNorm());
      return est;
    }
    if (c.trace() <= 0.0) {
      est.value = est.point = mu.norm();
      return est;
    }
  }

  est.closed_form = false;
  est.n_draws = draws;
  const Matrix chol = base_factor(n);
  Vector eta(n.base_dim());
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    CounterStream s(seed, StreamDomain::moments, i, 0);
    draw_base(n, s, chol, eta);
    const double v = std::pow((a * eta).norm(), p);
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / draws;
  const double var = std::max(sum2 / draws - mean * mean, 0.0) * draws / (draws - 1.0);
  est.std_error = std::sqrt(var / draws);
  est.point = std::pow(mean, 1.0 / p);
  est.value = std::pow(mean + 3.0 * est.std_error, 1.0 / p);
  return est;
}

/// Per-model cache so sweeps over t do not repeat Monte Carlo work.
class NoiseMoments {
 public:
  explicit NoiseMoments(const StateSpaceModel& m, std::uint64_t seed = kMomentSeed) : model_(&m), seed_(seed) {}

  const MomentEstimate& get(double p) {
    auto it = cache_.find(p);
    if (it == cache_.end()) it = cache_.emplace(p, noise_abs_moment(*model_, p, seed_)).first;
    return it->second;
  }

 private:
  const StateSpaceModel* model_;
  std::uint64_t seed_;
  std::map<double, MomentEstimate> cache_;
};

}  // namespace ergobound
