// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include "ergobound/bounds.hpp"
#include "ergobound/sim.hpp"
#include "test_support.hpp"

using namespace ergobound;

namespace {

StateSpaceModel ar1(double q, double sigma) {
  return make_model(Matrix::Constant(1, 1, q), Matrix::Constant(1, 1, sigma), NoiseSpec::gaussian1(0.0, 1.0));
}

class ThreadEnv {
 public:
  explicit ThreadEnv(const char* v) { setenv("ERGOBOUND_THREADS", v, 1); }
  ~ThreadEnv() { unsetenv("ERGOBOUND_THREADS"); }
};

}  // namespace

TEST(SimulatePaths, PointMassFollowsDeterministicRecursion) {
  std::mt19937_64 rng(31);
  const Matrix q = ergobound::testing::random_with_radius(rng, 3, 0.9);
  const Vector c = ergobound::testing::random_vector(rng, 3);
  const StateSpaceModel m = make_model(q, Matrix::Identity(3, 3), NoiseSpec::point_mass(c));
  const Vector x = ergobound::testing::random_vector(rng, 3);
  SimConfig cfg;
  cfg.n_paths = 5;
  cfg.horizon = 12;
  const SampleEnsemble ens = simulate_paths(m, x, cfg);
  Vector s = x;
  for (long t = 0; t <= 12; ++t) {
    for (Eigen::Index p = 0; p < 5; ++p) EXPECT_LE((ens.samples[t].row(p).transpose() - s).norm(), 1e-13);
    s = q * s + c;
  }
}

TEST(SimulatePaths, MeanAndVarianceMatchAr1) {
  const StateSpaceModel m = ar1(0.5, 1.0);
  SimConfig cfg;
  cfg.n_paths = 40000;
  cfg.horizon = 6;
  cfg.seed = 3;
  const SampleEnsemble ens = simulate_paths(m, Vector::Constant(1, 2.0), cfg);
  for (long t = 1; t <= 6; ++t) {
    const SampleMoments sm = sample_moments(ens.samples[t]);
    EXPECT_NEAR(sm.mean(0), 2.0 * std::pow(0.5, t), 4.0 * sm.mean_std_error(0)) << t;
    const double var = (1.0 - std::pow(0.25, t)) / 0.75;
    EXPECT_NEAR(sm.covariance(0, 0), var, 4.0 * var * std::sqrt(2.0 / cfg.n_paths)) << t;
  }
}

TEST(SimulatePaths, RecordTimesSubset) {
  const StateSpaceModel m = ar1(0.5, 1.0);
  SimConfig cfg;
  cfg.n_paths = 10;
  cfg.horizon = 8;
  const SampleEnsemble all = simulate_paths(m, Vector::Zero(1), cfg);
  cfg.record_times = {0, 3, 8};
  const SampleEnsemble some = simulate_paths(m, Vector::Zero(1), cfg);
  ASSERT_EQ(some.samples.size(), 3u);
  EXPECT_EQ(some.samples[1], all.samples[3]);
  EXPECT_EQ(some.samples[2], all.samples[8]);
  cfg.record_times = {9};
  EXPECT_THROW(simulate_paths(m, Vector::Zero(1), cfg), Error);
}

TEST(SimulatePaths, DeterministicAcrossThreadCounts) {
  const StateSpaceModel m = make_model(companion({1.2, -0.5}), Matrix::Identity(2, 2),
                                       NoiseSpec::laplace(Vector::Zero(2), Vector::Constant(2, 0.5)));
  SimConfig cfg;
  cfg.n_paths = 3000;
  cfg.horizon = 5;
  cfg.seed = 99;
  SampleEnsemble one, four;
  {
    ThreadEnv env("1");
    one = simulate_paths(m, Vector::Ones(2), cfg);
  }
  {
    ThreadEnv env("4");
    four = simulate_paths(m, Vector::Ones(2), cfg);
  }
  for (std::size_t k = 0; k < one.samples.size(); ++k) EXPECT_EQ(one.samples[k], four.samples[k]);
  cfg.seed = 100;
  const SampleEnsemble other = simulate_paths(m, Vector::Ones(2), cfg);
  EXPECT_NE(other.samples[5], one.samples[5]);
  EXPECT_EQ(one.model_digest, model_digest(m));
}

TEST(SimulatePaths, PathIndependentOfEnsembleSize) {
  const StateSpaceModel m = ar1(0.8, 1.0);
  SimConfig small, big;
  small.n_paths = 7;
  big.n_paths = 700;
  small.horizon = big.horizon = 4;
  const SampleEnsemble a = simulate_paths(m, Vector::Zero(1), small);
  const SampleEnsemble b = simulate_paths(m, Vector::Zero(1), big);
  EXPECT_EQ(a.samples[4], b.samples[4].topRows(7));
}

TEST(Stationary, TruncationFormula) {
  const linalg::StarNorm star = linalg::build_star_norm(Matrix::Constant(1, 1, 0.5));
  const long t = stationary_truncation(star, 1.0, 1e-3);
  const auto tail = [&](long k) { return star.K_d * std::pow(0.5, k + 1) / 0.5; };
  EXPECT_LE(tail(t), 1e-3);
  EXPECT_GT(tail(t - 1), 1e-3);
  const linalg::StarNorm zero = linalg::build_star_norm(Matrix::Zero(2, 2));
  EXPECT_EQ(stationary_truncation(zero, 1.0, 1e-6), 0);
}

TEST(Stationary, Ar1Variance) {
  const StateSpaceModel m = ar1(0.5, 1.0);
  const SampleEnsemble ens = sample_stationary(m, 200000, 5, 1e-6);
  EXPECT_GT(ens.truncation, 10);
  const SampleMoments sm = sample_moments(ens.samples[0]);
  EXPECT_NEAR(sm.mean(0), 0.0, 4.0 * sm.mean_std_error(0));
  EXPECT_NEAR(sm.covariance(0, 0), 4.0 / 3.0, 4.0 * (4.0 / 3.0) * std::sqrt(2.0 / 200000));
}

TEST(Stationary, ZeroQHasNoTail) {
  const StateSpaceModel m = make_model(Matrix::Zero(1, 1), Matrix::Identity(1, 1), NoiseSpec::gaussian1(0, 1));
  EXPECT_EQ(sample_stationary(m, 10, 1, 1e-3).truncation, 0);
}

TEST(Stationary, LaplaceMeanAndCovariance) {
  const StateSpaceModel m = make_model(companion({1.2, -0.5}), Matrix::Identity(2, 2),
                                       NoiseSpec::laplace(Vector::Constant(2, 0.3), Vector::Constant(2, 0.5)));
  const SampleEnsemble ens = sample_stationary(m, 100000, 8, 1e-4);
  const SampleMoments sm = sample_moments(ens.samples[0]);
  const Vector mu = m.stationary_mean();
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(sm.mean(i), mu(i), 4.0 * sm.mean_std_error(i));
  const Matrix cov = linalg::stationary_covariance(m.Q, m.drift_covariance());
  EXPECT_LE((sm.covariance - cov).norm() / cov.norm(), 0.03);
}

TEST(Stationary, TruncationAuditAgainstLongerSum) {
  // Shared streams: the T-term draw is a prefix of the longer sum, so the gap is the tail alone.
  const StateSpaceModel m = make_model(companion({1.2, -0.5}), Matrix::Identity(2, 2),
                                       NoiseSpec::laplace(Vector::Zero(2), Vector::Ones(2)));
  const double eps = 1e-3;
  const SampleEnsemble a = sample_stationary(m, 20000, 4, eps);
  const SampleEnsemble b = sample_stationary(m, 20000, 4, eps, a.truncation + 200);
  const double mean_gap = (a.samples[0] - b.samples[0]).rowwise().norm().mean();
  EXPECT_LE(mean_gap, eps);
}

TEST(EmpiricalMean, RecursionResidualAndVariance) {
  const StateSpaceModel m = make_model(companion({1.2, -0.5}), Matrix::Identity(2, 2),
                                       NoiseSpec::laplace(Vector::Zero(2), Vector::Ones(2)));
  const SampleEnsemble ens = empirical_mean_process(m, 64, Vector::Ones(2), 10, 2);
  EXPECT_LE(ens.max_recursion_residual, 1e-12);
  EXPECT_EQ(ens.samples.size(), 11u);
  EXPECT_EQ(ens.samples[0](0, 0), 1.0);
}

TEST(EmpiricalMean, VarianceScalesAsOneOverN) {
  const StateSpaceModel m = ar1(0.5, 1.0);
  const long n = 16, reps = 4000;
  Matrix s(reps, 1);
  for (long k = 0; k < reps; ++k)
    s(k, 0) = empirical_mean_process(m, n, Vector::Zero(1), 5, 1000 + k).samples[5](0, 0);
  const double var = (1.0 - std::pow(0.25, 5)) / 0.75 / n;
  EXPECT_NEAR(sample_moments(s).covariance(0, 0), var, 4.0 * var * std::sqrt(2.0 / reps));
}

TEST(EmpiricalMean, SinglePathMatchesSimulatePaths) {
  const StateSpaceModel m = ar1(0.7, 1.3);
  SimConfig cfg;
  cfg.n_paths = 1;
  cfg.horizon = 6;
  cfg.seed = 17;
  const SampleEnsemble a = simulate_paths(m, Vector::Constant(1, 0.5), cfg);
  const SampleEnsemble b = empirical_mean_process(m, 1, Vector::Constant(1, 0.5), 6, 17);
  for (long t = 0; t <= 6; ++t) EXPECT_NEAR(a.samples[t](0, 0), b.samples[t](0, 0), 1e-14);
}

TEST(SampleMoments, Basics) {
  Matrix s(4, 2);
  s << 1, 2, 3, 4, 5, 6, 7, 8;
  const SampleMoments sm = sample_moments(s);
  EXPECT_NEAR(sm.mean(0), 4.0, 1e-15);
  EXPECT_NEAR(sm.covariance(0, 1), 20.0 / 3.0, 1e-14);
  EXPECT_NEAR(sm.mean_std_error(1), std::sqrt(20.0 / 3.0 / 4.0), 1e-14);
  EXPECT_THROW(sample_moments(Matrix::Zero(1, 2)), Error);
}
