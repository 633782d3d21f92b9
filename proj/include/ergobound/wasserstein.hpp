// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

#include "ergobound/errors.hpp"
#include "ergobound/linalg.hpp"
#include "ergobound/rng.hpp"

namespace ergobound {

struct GaussianLaw {
  Vector mean;
  Matrix covariance;
};

struct EmpiricalEstimate {
  double value = 0.0;
  double std_error = 0.0;  // hypot of the two parts below; 0 for deterministic formulas
  double direction_std_error = 0.0;
  double sampling_std_error = 0.0;  // from disjoint sample batches
  std::size_t n_samples = 0;
  std::size_t n_directions = 0;
  std::uint64_t seed = 0;
};

/// Trace(Ca + Cb - 2 (Ca^{1/2} Cb Ca^{1/2})^{1/2}); may be slightly negative from rounding.
inline double bures_trace(const Matrix& ca, const Matrix& cb) {
  const Matrix ra = linalg::psd_sqrt(ca);
  const Matrix mid = linalg::symmetrized(ra * cb * ra);
  return ca.trace() + cb.trace() - 2.0 * linalg::psd_sqrt(mid).trace();
}

/// Bures distance min_U ||Ca^{1/2} - Cb^{1/2} U||_F over orthogonal U. Evaluating the
/// aligned difference avoids the cancellation of the trace form when Ca is close to Cb.
inline double bures_distance(const Matrix& ca, const Matrix& cb) {
  const Matrix ra = linalg::psd_sqrt(ca), rb = linalg::psd_sqrt(cb);
  Eigen::JacobiSVD<Matrix> svd(ra.transpose() * rb, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix u = svd.matrixV() * svd.matrixU().transpose();
  return (ra - rb * u).norm();
}

inline double gaussian_w2(const GaussianLaw& a, const GaussianLaw& b) {
  require(a.mean.size() == b.mean.size() && a.covariance.rows() == b.covariance.rows() &&
              a.covariance.rows() == a.mean.size(),
          ErrorCode::DimensionMismatch, "Gaussian laws of different dimension");
  const double dm = (a.mean - b.mean).norm();
  if (a.covariance == b.covariance) {
    linalg::psd_sqrt(a.covariance);  // validates
    return dm;
  }
  return std::hypot(dm, bures_distance(a.covariance, b.covariance));
}

// ---------------------------------------------------------------------------
// One-dimensional distances
// ---------------------------------------------------------------------------

namespace detail {

inline double abs_pow(double v, double r) {
  const double a = std::abs(v);
  if (r == 1.0) return a;
  if (r == 2.0) return a * a;
  return std::pow(a, r);
}

}  // namespace detail

/// Quantile coupling of two equally sized samples that are already sorted.
inline double w1d_sorted(const std::vector<double>& xs, const std::vector<double>& ys, double r) {
  require(xs.size() == ys.size(), ErrorCode::UnequalSampleSizes, "samples differ in size");
  require(!xs.empty(), ErrorCode::InvalidArgument, "empty samples");
  require(r >= 1.0, ErrorCode::InvalidArgument, "order r must be >= 1");
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) acc += detail::abs_pow(xs[i] - ys[i], r);
  acc /= static_cast<double>(xs.size());
  return r == 1.0 ? acc : std::pow(acc, 1.0 / r);
}

inline EmpiricalEstimate empirical_w1d(std::vector<double> xs, std::vector<double> ys, double r) {
  require(xs.size() == ys.size(), ErrorCode::UnequalSampleSizes, "samples differ in size");
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  EmpiricalEstimate e;
  e.value = w1d_sorted(xs, ys, r);
  e.n_samples = xs.size();
  return e;
}

// Gauss quadrature rules by Golub-Welsch.
struct QuadratureRule {
  Vector nodes;
  Vector weights;
};

namespace detail {

inline QuadratureRule golub_welsch(const Vector& diag, const Vector& off, double mu0) {
  const Eigen::Index n = diag.size();
  Matrix j = Matrix::Zero(n, n);
  j.diagonal() = diag;
  for (Eigen::Index k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = off(k - 1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(j);
  QuadratureRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights = mu0 * es.eigenvectors().row(0).transpose().array().square();
  return rule;
}

}  // namespace detail

/// Nodes/weights for int f(x) e^{-x^2} dx.
inline QuadratureRule gauss_hermite(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "need at least one node");
  Vector diag = Vector::Zero(n), off(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(0.5 * k);
  return detail::golub_welsch(diag, off, std::sqrt(std::numbers::pi));
}

/// E|c + Z|^r for Z ~ N(0, 1).
///
/// Uses the Kummer-transformed series
///   2^{r/2} Gamma((r+1)/2) / sqrt(pi) * e^{-z} M((r+1)/2, 1/2, z),  z = c^2/2,
/// whose terms are all positive. Beyond |c| = 30 the kink is far outside the
/// Gauss-Hermite node range and the smooth quadrature is used instead.
inline double normal_abs_moment(double c, double r, int nodes = 64) {
  require(r >= 0.0, ErrorCode::InvalidArgument, "order must be >= 0");
  if (r == 0.0) return 1.0;
  if (r == 2.0) return 1.0 + c * c;
  if (std::abs(c) > 30.0) {
    const QuadratureRule gh = gauss_hermite(nodes);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < gh.nodes.size(); ++i)
      acc += gh.weights(i) * std::pow(std::abs(c + std::numbers::sqrt2 * gh.nodes(i)), r);
    return acc / std::sqrt(std::numbers::pi);
  }
  const double a = 0.5 * (r + 1.0), z = 0.5 * c * c;
  double term = std::exp(-z), sum = term;
  for (int k = 0; k < 100000; ++k) {
    term *= (a + k) / (0.5 + k) * z / (k + 1.0);
    sum += term;
    if (k > z && term < 1e-17 * sum) break;
  }
  return std::exp(0.5 * r * std::numbers::ln2 + std::lgamma(a)) / std::sqrt(std::numbers::pi) * sum;
}

/// W_r between N(m1, s1^2) and N(m2, s2^2), i.e. (E|dm + ds Z|^r)^{1/r}.
inline double gaussian_wr_1d(double m1, double s1, double m2, double s2, double r, int quad_nodes = 64) {
  require(s1 >= 0.0 && s2 >= 0.0, ErrorCode::InvalidArgument, "standard deviations must be >= 0");
  require(r >= 1.0, ErrorCode::InvalidArgument, "order r must be >= 1");
  const double dm = m2 - m1, ds = std::abs(s2 - s1);
  if (r == 2.0) return std::sqrt(dm * dm + ds * ds);
  if (ds == 0.0) return std::abs(dm);
  return ds * std::pow(normal_abs_moment(dm / ds, r, quad_nodes), 1.0 / r);
}

// ---------------------------------------------------------------------------
// Sliced estimators
// ---------------------------------------------------------------------------

/// normalized: ((1/A_d) int W_r^r)^{1/r}; as_printed: (1/A_d) (int W_r^r)^{1/r}.
enum class SlicedConvention { normalized, as_printed };

inline double sphere_area(int d) { return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d); }

/// Unit directions as columns. Random mode draws n/2 directions and relies on
/// the antithetic partner -v giving the identical projected distance.
inline Matrix slicing_directions(int d, int n_directions, std::uint64_t seed, bool equispaced = false) {
  require(d >= 2, ErrorCode::InvalidArgument, "sliced distances need d >= 2");
  require(n_directions >= 1, ErrorCode::InvalidArgument, "need at least one direction");
  if (equispaced) {
    require(d == 2, ErrorCode::InvalidArgument, "equispaced directions only for d = 2");
    Matrix dirs(2, n_directions);
    for (int k = 0; k < n_directions; ++k) {
      const double a = std::numbers::pi * k / n_directions;
      dirs(0, k) = std::cos(a);
      dirs(1, k) = std::sin(a);
    }
    return dirs;
  }
  const int unique = std::max(1, n_directions / 2);
  Matrix dirs(d, unique);
  for (int k = 0; k < unique; ++k) {
    CounterStream s(seed, StreamDomain::directions, static_cast<std::uint64_t>(k), 0);
    double n2 = 0.0;
    do {
      for (int i = 0; i < d; ++i) dirs(i, k) = s.normal();
      n2 = dirs.col(k).squaredNorm();
    } while (n2 < 1e-20);
    dirs.col(k) /= std::sqrt(n2);
  }
  return dirs;
}

namespace detail {

inline EmpiricalEstimate aggregate_sliced(const std::vector<double>& per_dir_pow, double r, int d,
                                          SlicedConvention conv, bool random) {
  const auto m = static_cast<double>(per_dir_pow.size());
  double mean = 0.0;
  for (double v : per_dir_pow) mean += v;
  mean /= m;
  double var = 0.0;
  for (double v : per_dir_pow) var += (v - mean) * (v - mean);
  var = per_dir_pow.size() > 1 ? var / (m - 1.0) : 0.0;
  const double se_mean = random ? std::sqrt(var / m) : 0.0;

  EmpiricalEstimate e;
  e.value = std::pow(mean, 1.0 / r);
  e.std_error = mean > 0.0 ? se_mean * std::pow(mean, 1.0 / r - 1.0) / r : 0.0;
  if (conv == SlicedConvention::as_printed) {
    const double f = std::pow(sphere_area(d), 1.0 / r - 1.0);
    e.value *= f;
    e.std_error *= f;
  }
  return e;
}

}  // namespace detail

struct SlicedOptions {
  double r = 1.0;
  int n_directions = 256;
  std::uint64_t seed = 0;
  bool equispaced = false;  // d = 2 only
  SlicedConvention convention = SlicedConvention::normalized;
};

namespace detail {

inline constexpr int kSamplingBatches = 10;

/// Run boundaries: kSamplingBatches equal batches, then the leftover rows.
inline std::vector<std::size_t> batch_runs(std::size_t n) {
  const std::size_t b = n / kSamplingBatches;
  if (b < 2) return {0, n};
  std::vector<std::size_t> runs;
  for (int k = 0; k <= kSamplingBatches; ++k) runs.push_back(k * b);
  if (runs.back() != n) runs.push_back(n);
  return runs;
}

inline void sort_runs(std::vector<double>& v, const std::vector<std::size_t>& runs) {
  for (std::size_t k = 0; k + 1 < runs.size(); ++k) std::sort(v.begin() + runs[k], v.begin() + runs[k + 1]);
}

/// Merges sorted runs pairwise until the whole vector is sorted.
inline void merge_runs(std::vector<double>& v, std::vector<std::size_t> runs) {
  while (runs.size() > 2) {
    std::vector<std::size_t> next{0};
    for (std::size_t k = 0; k + 1 < runs.size(); k += 2) {
      if (k + 2 < runs.size()) {
        std::inplace_merge(v.begin() + runs[k], v.begin() + runs[k + 1], v.begin() + runs[k + 2]);
        next.push_back(runs[k + 2]);
      } else {
        next.push_back(runs[k + 1]);
      }
    }
    runs = std::move(next);
  }
}

inline double std_error_of_mean(const std::vector<double>& vals) {
  const auto m = static_cast<double>(vals.size());
  if (vals.size() < 2) return 0.0;
  double mean = 0.0, var = 0.0;
  for (double v : vals) mean += v;
  mean /= m;
  for (double v : vals) var += (v - mean) * (v - mean);
  return std::sqrt(var / (m - 1.0) / m);
}

}  // namespace detail

/// Sampling error of an empirical distance from ten disjoint batches of rows.
template <class Distance>
double batch_std_error(const Matrix& xs, const Matrix& ys, const Distance& distance) {
  const Eigen::Index b = std::min(xs.rows(), ys.rows()) / detail::kSamplingBatches;
  if (b < 2) return 0.0;
  std::vector<double> vals;
  for (int k = 0; k < detail::kSamplingBatches; ++k)
    vals.push_back(distance(xs.middleRows(k * b, b), ys.middleRows(k * b, b)));
  // a batch of size n/10 has ten times the variance of the full-sample estimate
  return detail::std_error_of_mean(vals);
}

/// Sliced distance between a fixed reference sample and any number of others.
/// Reference projections are sorted once, within ten batches; the full-sample
/// distance merges the batches, and the batch distances give the sampling error.
class SlicedProjector {
 public:
  SlicedProjector(const Matrix& reference, const SlicedOptions& opt) : opt_(opt) {
    require(reference.rows() >= 1, ErrorCode::InvalidArgument, "empty reference sample");
    require(opt.r >= 1.0, ErrorCode::InvalidArgument, "order r must be >= 1");
    d_ = static_cast<int>(reference.cols());
    n_ = static_cast<std::size_t>(reference.rows());
    runs_ = detail::batch_runs(n_);
    dirs_ = slicing_directions(d_, opt.n_directions, opt.seed, opt.equispaced);
    const Matrix proj = reference * dirs_;
    batch_sorted_.resize(dirs_.cols());
    for (Eigen::Index k = 0; k < dirs_.cols(); ++k) {
      batch_sorted_[k].assign(proj.col(k).data(), proj.col(k).data() + proj.rows());
      detail::sort_runs(batch_sorted_[k], runs_);
    }
  }

  EmpiricalEstimate distance(const Matrix& xs) const {
    require(xs.cols() == d_, ErrorCode::DimensionMismatch, "sample dimension differs from reference");
    require(static_cast<std::size_t>(xs.rows()) == n_, ErrorCode::UnequalSampleSizes, "samples differ in size");
    const std::size_t n_batches = runs_.size() > 2 ? detail::kSamplingBatches : 0;
    std::vector<double> per_dir(dirs_.cols());
    std::vector<std::vector<double>> per_batch(n_batches, std::vector<double>(dirs_.cols()));
    std::vector<double> buf(n_), ref;
    const auto run = [](const std::vector<double>& v, std::size_t b, std::size_t e) {
      return std::vector<double>(v.begin() + b, v.begin() + e);
    };
    for (Eigen::Index k = 0; k < dirs_.cols(); ++k) {
      const Vector p = xs * dirs_.col(k);
      buf.assign(p.data(), p.data() + p.size());
      detail::sort_runs(buf, runs_);
      for (std::size_t j = 0; j < n_batches; ++j)
        per_batch[j][k] = detail::abs_pow(
            w1d_sorted(run(buf, runs_[j], runs_[j + 1]), run(batch_sorted_[k], runs_[j], runs_[j + 1]), opt_.r),
            opt_.r);
      ref = batch_sorted_[k];
      detail::merge_runs(buf, runs_);
      detail::merge_runs(ref, runs_);
      per_dir[k] = detail::abs_pow(w1d_sorted(buf, ref, opt_.r), opt_.r);
    }
    EmpiricalEstimate e = detail::aggregate_sliced(per_dir, opt_.r, d_, opt_.convention, !opt_.equispaced);
    e.direction_std_error = e.std_error;
    std::vector<double> batch_values;
    for (const auto& pb : per_batch)
      batch_values.push_back(detail::aggregate_sliced(pb, opt_.r, d_, opt_.convention, false).value);
    e.sampling_std_error = detail::std_error_of_mean(batch_values);
    e.std_error = std::hypot(e.direction_std_error, e.sampling_std_error);
    e.n_samples = n_;
    e.n_directions = opt_.equispaced ? dirs_.cols() : 2 * dirs_.cols();
    e.seed = opt_.seed;
    return e;
  }

  const Matrix& directions() const { return dirs_; }

 private:
  SlicedOptions opt_;
  int d_ = 0;
  std::size_t n_ = 0;
  std::vector<std::size_t> runs_;
  Matrix dirs_;
  std::vector<std::vector<double>> batch_sorted_;
};

/// Samples are rows of xs and ys.
inline EmpiricalEstimate sliced_empirical(const Matrix& xs, const Matrix& ys, const SlicedOptions& opt) {
  require(xs.rows() == ys.rows(), ErrorCode::UnequalSampleSizes, "samples differ in size");
  return SlicedProjector(ys, opt).distance(xs);
}

}  // namespace ergobound
