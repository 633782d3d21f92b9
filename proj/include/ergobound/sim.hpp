// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ergobound/errors.hpp"
#include "ergobound/linalg.hpp"
#include "ergobound/model.hpp"
#include "ergobound/moments.hpp"
#include "ergobound/rng.hpp"

namespace ergobound {

struct SimConfig {
  std::size_t n_paths = 1000;
  long horizon = 10;
  std::uint64_t seed = 0;
  double stationary_tol = 1e-3;
  std::optional<long> truncation;  // derived from the tail bound when absent
  std::vector<long> record_times;  // empty: every t = 0..horizon
};

struct SampleEnsemble {
  std::vector<long> times;
  std::vector<Matrix> samples;  // one n_paths x d block per recorded time
  SimConfig config;
  std::string model_digest;
  long truncation = -1;              // stationary draws only
  double max_recursion_residual = 0;  // empirical mean process only
};

/// ERGOBOUND_THREADS if set and positive, else hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("ERGOBOUND_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(begin, end) over contiguous chunks of [0, n).
inline void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, n / 256));
  if (workers <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk, e = std::min(n, b + chunk);
    if (b < e) pool.emplace_back(body, b, e);
  }
  for (auto& th : pool) th.join();
}

namespace detail {

inline std::vector<long> resolve_times(const SimConfig& c) {
  if (!c.record_times.empty()) {
    for (long t : c.record_times)
      require(t >= 0 && t <= c.horizon, ErrorCode::InvalidArgument, "record time outside [0, horizon]");
    return c.record_times;
  }
  std::vector<long> all(c.horizon + 1);
  for (long t = 0; t <= c.horizon; ++t) all[t] = t;
  return all;
}

/// Draws Sigma xi for (path, time) into out.
struct NoiseDrawer {
  const NoiseSpec& noise;
  Matrix a;  // Sigma * loading
  Matrix chol;
  std::uint64_t seed;
  StreamDomain domain;

  NoiseDrawer(const StateSpaceModel& m, std::uint64_t s, StreamDomain dom)
      : noise(m.noise), a(m.Sigma * m.noise.loading), chol(base_factor(m.noise)), seed(s), domain(dom) {}

  void draw(std::uint64_t path, std::uint64_t time, Vector& eta, Vector& out) const {
    CounterStream s(seed, domain, path, time);
    draw_base(noise, s, chol, eta);
    out.noalias() = a * eta;
  }
};

}  // namespace detail

/// Independent paths of X_t = Q X_{t-1} + Sigma xi_t started at x.
inline SampleEnsemble simulate_paths(const StateSpaceModel& m, const Vector& x, const SimConfig& cfg) {
  check_model_shapes(m);
  require(cfg.n_paths >= 1, ErrorCode::InvalidArgument, "n_paths must be >= 1");
  require(cfg.horizon >= 1, ErrorCode::InvalidArgument, "horizon must be >= 1");
  require(x.size() == m.dim(), ErrorCode::DimensionMismatch, "x has wrong size");

  SampleEnsemble ens;
  ens.config = cfg;
  ens.model_digest = model_digest(m);
  ens.times = detail::resolve_times(cfg);
  const Eigen::Index d = m.dim();
  ens.samples.assign(ens.times.size(), Matrix(static_cast<Eigen::Index>(cfg.n_paths), d));
  std::vector<long> slot(cfg.horizon + 1, -1);
  for (std::size_t k = 0; k < ens.times.size(); ++k) slot[ens.times[k]] = static_cast<long>(k);

  const detail::NoiseDrawer drawer(m, cfg.seed, StreamDomain::path_noise);
  parallel_chunks(cfg.n_paths, [&](std::size_t b, std::size_t e) {
    Vector state(d), next(d), noise(d), eta(m.noise.base_dim());
    for (std::size_t p = b; p < e; ++p) {
      state = x;
      if (slot[0] >= 0) ens.samples[slot[0]].row(p) = state.transpose();
      for (long t = 1; t <= cfg.horizon; ++t) {
        drawer.draw(p, static_cast<std::uint64_t>(t), eta, noise);
        next.noalias() = m.Q * state;
        state = next + noise;
        if (slot[t] >= 0) ens.samples[slot[t]].row(p) = state.transpose();
      }
    }
  });
  return ens;
}

/// Least T with K_d E|Sigma xi| s^{T+1} / (1 - s) <= eps.
inline long stationary_truncation(const linalg::StarNorm& star, double first_moment, double eps) {
  require(eps > 0.0, ErrorCode::InvalidArgument, "stationary tolerance must be positive");
  const double s = star.value;
  require(s < 1.0, ErrorCode::NotSchurStable, "||Q||_* must be below one");
  if (s == 0.0 || first_moment == 0.0) return 0;
  const double c = star.K_d * first_moment / (1.0 - s);
  if (c * s <= eps) return 0;
  long t = static_cast<long>(std::ceil(std::log(eps / c) / std::log(s) - 1.0));
  t = std::max(0L, t);
  while (t > 0 && c * std::pow(s, t) <= eps) --t;  // guard rounding on the low side
  while (c * std::pow(s, t + 1) > eps) ++t;
  return t;
}

/// n draws of sum_{j=0}^{T} Q^j Sigma xi_j, an eps-accurate surrogate for X_inf.
inline SampleEnsemble sample_stationary(const StateSpaceModel& m, std::size_t n, std::uint64_t seed, double eps,
                                        std::optional<long> truncation = std::nullopt) {
  check_model_shapes(m);
  require(n >= 1, ErrorCode::InvalidArgument, "need at least one draw");
  require(m.noise.moment_available(1.0), ErrorCode::MomentUnavailable, "stationary sampling needs E|xi| finite");
  const linalg::StarNorm star = linalg::build_star_norm(m.Q);
  const long big_t = truncation ? *truncation : stationary_truncation(star, noise_abs_moment(m, 1.0).value, eps);
  require(big_t >= 0, ErrorCode::InvalidArgument, "truncation must be >= 0");

  SampleEnsemble ens;
  ens.config.n_paths = n;
  ens.config.horizon = 0;
  ens.config.seed = seed;
  ens.config.stationary_tol = eps;
  ens.config.truncation = big_t;
  ens.model_digest = model_digest(m);
  ens.truncation = big_t;
  ens.times = {0};
  const Eigen::Index d = m.dim();
  ens.samples.assign(1, Matrix(static_cast<Eigen::Index>(n), d));

  const detail::NoiseDrawer drawer(m, seed, StreamDomain::stationary);
  parallel_chunks(n, [&](std::size_t b, std::size_t e) {
    Vector acc(d), next(d), noise(d), eta(m.noise.base_dim());
    for (std::size_t p = b; p < e; ++p) {
      acc.setZero();
      for (long j = big_t; j >= 0; --j) {  // Horner: acc = Q acc + Sigma xi_j
        drawer.draw(p, static_cast<std::uint64_t>(j), eta, noise);
        next.noalias() = m.Q * acc;
        acc = next + noise;
      }
      ens.samples[0].row(p) = acc.transpose();
    }
  });
  return ens;
}

/// Averaged path S_t of n copies. Also checks S_{t+1} = Q S_t + Sigma zeta_{t+1}
/// with zeta the average noise, reporting the largest residual.
inline SampleEnsemble empirical_mean_process(const StateSpaceModel& m, std::size_t n, const Vector& x, long horizon,
                                             std::uint64_t seed) {
  check_model_shapes(m);
  require(n >= 1 && horizon >= 1, ErrorCode::InvalidArgument, "need n >= 1 and horizon >= 1");
  require(x.size() == m.dim(), ErrorCode::DimensionMismatch, "x has wrong size");
  const Eigen::Index d = m.dim();
  const NoiseSpec& ns = m.noise;
  const Matrix chol = base_factor(ns);

  Matrix sum_x = Matrix::Zero(d, horizon + 1);
  Matrix sum_xi = Matrix::Zero(ns.dim(), horizon + 1);
  Vector state(d), eta(ns.base_dim()), xi(ns.dim());
  for (std::size_t p = 0; p < n; ++p) {
    state = x;
    sum_x.col(0) += state;
    for (long t = 1; t <= horizon; ++t) {
      CounterStream s(seed, StreamDomain::path_noise, p, static_cast<std::uint64_t>(t));
      draw_base(ns, s, chol, eta);
      xi.noalias() = ns.loading * eta;
      state = m.Q * state + m.Sigma * xi;
      sum_x.col(t) += state;
      sum_xi.col(t) += xi;
    }
  }

  SampleEnsemble ens;
  ens.config.n_paths = n;
  ens.config.horizon = horizon;
  ens.config.seed = seed;
  ens.model_digest = model_digest(m);
  const double inv = 1.0 / static_cast<double>(n);
  for (long t = 0; t <= horizon; ++t) {
    ens.times.push_back(t);
    ens.samples.emplace_back((sum_x.col(t) * inv).transpose());
  }
  for (long t = 0; t < horizon; ++t) {
    const Vector s_t = sum_x.col(t) * inv, s_next = sum_x.col(t + 1) * inv, zeta = sum_xi.col(t + 1) * inv;
    const double res = (s_next - m.Q * s_t - m.Sigma * zeta).cwiseAbs().maxCoeff();
    ens.max_recursion_residual = std::max(ens.max_recursion_residual, res);
  }
  return ens;
}

struct SampleMoments {
  Vector mean;
  Vector mean_std_error;
  Matrix covariance;
};

/// Row samples: mean, its standard error and the unbiased covariance.
inline SampleMoments sample_moments(const Matrix& samples) {
  const auto n = static_cast<double>(samples.rows());
  require(samples.rows() >= 2, ErrorCode::InvalidArgument, "need at least two samples");
  SampleMoments sm;
  sm.mean = samples.colwise().mean().transpose();
  const Matrix centred = samples.rowwise() - sm.mean.transpose();
  sm.covariance = centred.transpose() * centred / (n - 1.0);
  sm.mean_std_error = (sm.covariance.diagonal() / n).cwiseSqrt();
  return sm;
}

}  // namespace ergobound
