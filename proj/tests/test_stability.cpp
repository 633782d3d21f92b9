// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ergobound/stability.hpp"

using namespace ergobound;

TEST(SchurStable, Examples) {
  const StabilityVerdict v = is_schur_stable(companion({0.3, 0.5}));
  EXPECT_TRUE(v.stable);
  EXPECT_NEAR(v.spectral_radius, (0.3 + std::sqrt(0.09 + 2.0)) / 2.0, 1e-12);
  EXPECT_GT(v.margin, 0.0);

  const StabilityVerdict id = is_schur_stable(Matrix::Identity(3, 3));
  EXPECT_FALSE(id.stable);
  EXPECT_TRUE(id.boundary);

  const StabilityVerdict zero = is_schur_stable(Matrix::Zero(2, 2));
  EXPECT_TRUE(zero.stable);
  EXPECT_EQ(zero.spectral_radius, 0.0);
}

TEST(Ar2Region, Examples) {
  EXPECT_EQ(ar2_region(0.3, 0.5), Ar2Region::diamond);
  EXPECT_EQ(ar2_region(1.2, -0.5), Ar2Region::wing);
  EXPECT_EQ(ar2_region(1.5, 0.8), Ar2Region::unstable);
  EXPECT_NEAR(ar2_root_modulus(1.2, -0.5), std::sqrt(0.5), 1e-15);
  // the two-arccos sum for (1.2, -0.5)
  const double s = 2.0 * std::acos((1 + 1.44 - 0.25) / 2.4) + std::acos((1 - 1.44 + 0.25) / 1.0);
  EXPECT_NEAR(s, 2.6048, 1e-4);
  EXPECT_LT(s, std::numbers::pi);
}

TEST(Ar2Region, AgreesWithEigenvaluesOnGrid) {
  long disagreements = 0, checked = 0;
  for (int i = 0; i <= 200; ++i) {
    for (int j = 0; j <= 200; ++j) {
      const double p1 = -2.0 + 0.02 * i, p2 = -2.0 + 0.02 * j;
      const double rho = linalg::eigen(companion({p1, p2})).spectral_radius;
      if (std::abs(rho - 1.0) <= 1e-6) continue;
      ++checked;
      const Ar2Region r = ar2_region(p1, p2);
      const bool region_stable = r == Ar2Region::diamond || r == Ar2Region::wing;
      if (region_stable != (rho < 1.0)) ++disagreements;
    }
  }
  EXPECT_EQ(disagreements, 0);
  EXPECT_GT(checked, 40000);
}

TEST(Ar2Region, SymmetricUnderSignFlip) {
  for (int i = 0; i <= 80; ++i) {
    for (int j = 0; j <= 80; ++j) {
      const double p1 = -2.0 + 0.05 * i, p2 = -2.0 + 0.05 * j;
      EXPECT_EQ(ar2_region(p1, p2), ar2_region(-p1, p2));
    }
  }
}

TEST(SufficientTests, Examples) {
  const SufficientFlags ek = sufficient_tests({-0.9, -0.5, -0.1});
  EXPECT_TRUE(ek.enestrom_kakeya);
  EXPECT_TRUE(is_schur_stable(companion({-0.9, -0.5, -0.1})).stable);

  EXPECT_TRUE(sufficient_tests({0.2, 0.3, 0.1}).cohn);

  const SufficientFlags p3 = sufficient_tests({0.3, 0.2, 0.1});
  EXPECT_TRUE(p3.p3_sufficient);
  EXPECT_TRUE(is_schur_stable(companion({0.3, 0.2, 0.1})).stable);

  EXPECT_TRUE(sufficient_tests({0.5, 0.0, 0.2, 0.1}).p4_sufficient);
  EXPECT_FALSE(sufficient_tests({0.5, 0.1, 0.2, 0.1}).p4_sufficient);
  EXPECT_FALSE(sufficient_tests({1.2, -0.5}).any());
}

TEST(SufficientTests, SoundOnP3Grid) {
  long raised = 0, unsound = 0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      for (int k = 0; k <= 100; ++k) {
        const std::vector<double> phi{-1.0 + 0.02 * i, -1.0 + 0.02 * j, -1.0 + 0.02 * k};
        if (!sufficient_tests(phi).any()) continue;
        const double rho = linalg::eigen(companion(phi)).spectral_radius;
        if (std::abs(rho - 1.0) <= 1e-9) continue;
        ++raised;
        if (rho >= 1.0) ++unsound;
      }
    }
  }
  EXPECT_EQ(unsound, 0);
  EXPECT_GT(raised, 1000);
}

TEST(SufficientTests, SoundOnRandomP4) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20000; ++trial) {
    const std::vector<double> phi{u(rng), 0.0, u(rng), u(rng)};
    if (sufficient_tests(phi).any()) EXPECT_LT(linalg::eigen(companion(phi)).spectral_radius, 1.0);
  }
}

TEST(ArStability, RegionLabels) {
  EXPECT_EQ(ar_stability({0.3, 0.5}).region_label, RegionLabel::diamond);
  EXPECT_EQ(ar_stability({1.2, -0.5}).region_label, RegionLabel::wing);
  EXPECT_FALSE(ar_stability({1.5, 0.8}).stable);
  EXPECT_FALSE(ar_stability({1.5, 0.8}).region_label.has_value());
  EXPECT_EQ(ar_stability({0.2, 0.3, 0.1}).region_label, RegionLabel::cohn);
}
