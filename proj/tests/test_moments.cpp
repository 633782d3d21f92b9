// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ergobound/moments.hpp"

using namespace ergobound;

namespace {

StateSpaceModel scalar(const NoiseSpec& n, double sigma = 1.0) {
  return make_model(Matrix::Constant(1, 1, 0.5), Matrix::Constant(1, 1, sigma), n);
}

}  // namespace

TEST(NoiseAbsMoment, ClosedForms) {
  const double s2pi = std::sqrt(2.0 / std::numbers::pi);
  EXPECT_NEAR(noise_abs_moment(scalar(NoiseSpec::gaussian1(0, 4)), 1).value, 2 * s2pi, 1e-14);
  EXPECT_NEAR(noise_abs_moment(scalar(NoiseSpec::gaussian1(0, 1), 3.0), 2).value, 3.0, 1e-14);
  // Laplace(0, b): E|X| = b, E X^2 = 2 b^2
  const NoiseSpec lap = NoiseSpec::laplace(Vector::Zero(1), Vector::Constant(1, 0.5));
  EXPECT_NEAR(noise_abs_moment(scalar(lap), 1).value, 0.5, 1e-14);
  EXPECT_NEAR(noise_abs_moment(scalar(lap), 2).value, std::sqrt(0.5), 1e-14);
  // uniform(-h, h): E|X| = h/2
  EXPECT_NEAR(noise_abs_moment(scalar(NoiseSpec::uniform(Vector::Constant(1, 3))), 1).value, 1.5, 1e-14);
  // Student-t nu = 3, s = 1: E|X| = 2 sqrt(3) / pi
  EXPECT_NEAR(noise_abs_moment(scalar(NoiseSpec::student_t(3, Vector::Ones(1))), 1).value,
              2 * std::sqrt(3.0) / std::numbers::pi, 1e-12);
  EXPECT_NEAR(noise_abs_moment(scalar(NoiseSpec::point_mass(Vector::Constant(1, -2))), 3).value, 2.0, 1e-15);
  EXPECT_TRUE(noise_abs_moment(scalar(lap), 1.5).closed_form);
}

TEST(NoiseAbsMoment, HeavyTailRefused) {
  try {
    noise_abs_moment(scalar(NoiseSpec::student_t(1.5, Vector::Ones(1))), 2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MomentUnavailable);
  }
}

TEST(NoiseAbsMoment, MonteCarloEnvelopeCoversClosedForm) {
  // 2-D independent Laplace has no closed form for E|xi|; check against a large-sample reference.
  const NoiseSpec lap = NoiseSpec::laplace(Vector::Zero(2), Vector::Ones(2));
  const StateSpaceModel m = make_model(Matrix::Identity(2, 2) * 0.5, Matrix::Identity(2, 2), lap);
  const MomentEstimate e = noise_abs_moment(m, 1.0, kMomentSeed, 200000);
  EXPECT_FALSE(e.closed_form);
  EXPECT_GT(e.std_error, 0.0);
  EXPECT_GT(e.value, e.point);
  // E|xi|^2 = 4 exactly; with p = 2 the envelope must cover it
  const MomentEstimate e2 = noise_abs_moment(m, 2.0, kMomentSeed, 200000);
  EXPECT_GE(e2.value, 2.0);
  EXPECT_NEAR(e2.point, 2.0, 0.02);
  // Jensen: first moment below the second
  EXPECT_LE(e.point, e2.point);
}

TEST(NoiseAbsMoment, GaussianVectorSecondMoment) {
  Matrix c(2, 2);
  c << 2.0, 0.5, 0.5, 1.0;
  const StateSpaceModel m =
      make_model(Matrix::Identity(2, 2) * 0.5, Matrix::Identity(2, 2), NoiseSpec::gaussian(Vector::Ones(2), c));
  const MomentEstimate e = noise_abs_moment(m, 2.0);
  EXPECT_TRUE(e.closed_form);
  EXPECT_NEAR(e.value, std::sqrt(3.0 + 2.0), 1e-14);
}

TEST(NoiseMoments, CachesAndIsDeterministic) {
  const NoiseSpec lap = NoiseSpec::laplace(Vector::Zero(2), Vector::Ones(2));
  const StateSpaceModel m = make_model(Matrix::Identity(2, 2) * 0.5, Matrix::Identity(2, 2), lap);
  NoiseMoments a(m), b(m);
  const double first = a.get(1.0).value;
  EXPECT_EQ(&a.get(1.0), &a.get(1.0));
  EXPECT_EQ(first, b.get(1.0).value);
}
