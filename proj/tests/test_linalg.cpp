// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ergobound/linalg.hpp"
#include "test_support.hpp"

using namespace ergobound;
using namespace ergobound::linalg;
using ergobound::testing::random_matrix;
using ergobound::testing::random_spd;
using ergobound::testing::random_with_radius;

namespace {

std::vector<double> sorted_moduli(const CVector& v) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(std::abs(v(i)));
  std::sort(out.begin(), out.end());
  return out;
}

/// Independent evaluation of the star norm from its definition with explicit J.
double star_oracle(const StarNorm& s, const Matrix& a) {
  const Eigen::Index d = a.rows();
  CMatrix j = CMatrix::Zero(d, d), jinv = CMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    j(i, i) = std::pow(s.kappa, static_cast<double>(i + 1));
    jinv(i, i) = 1.0 / j(i, i);
  }
  const CMatrix b = j * s.U.adjoint() * a.cast<Complex>() * s.U * jinv;
  return b.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

TEST(Eigen, DiagonalMatrix) {
  Matrix a = Matrix::Zero(2, 2);
  a.diagonal() << 0.5, 0.9;
  const SpectralInfo s = eigen(a);
  EXPECT_NEAR(s.spectral_radius, 0.9, 1e-15);
  const auto mods = sorted_moduli(s.eigenvalues);
  EXPECT_NEAR(mods[0], 0.5, 1e-15);
  EXPECT_TRUE(s.diagonalizable);
}

TEST(Eigen, CompanionQuadraticFormula) {
  Matrix q(2, 2);
  q << 1.2, -0.5, 1.0, 0.0;
  const SpectralInfo s = eigen(q);
  // z^2 - 1.2 z + 0.5: roots 0.6 +- i sqrt(0.5 - 0.36)
  const double im = std::sqrt(0.5 - 0.36);
  for (Eigen::Index i = 0; i < 2; ++i) {
    EXPECT_NEAR(s.eigenvalues(i).real(), 0.6, 1e-12);
    EXPECT_NEAR(std::abs(s.eigenvalues(i).imag()), im, 1e-12);
  }
  EXPECT_NEAR(s.spectral_radius, std::sqrt(0.5), 1e-12);
  EXPECT_TRUE(conjugate_pairs_matched(s.eigenvalues));
}

TEST(Eigen, IdentityRadiusOne) {
  const SpectralInfo s = eigen(Matrix::Identity(3, 3));
  EXPECT_DOUBLE_EQ(s.spectral_radius, 1.0);
  EXPECT_TRUE(s.diagonalizable);
}

TEST(Eigen, JordanBlockNotDiagonalizable) {
  Matrix j(2, 2);
  j << 0.5, 1.0, 0.0, 0.5;
  EXPECT_FALSE(eigen(j).diagonalizable);
}

TEST(Eigen, DefectiveCompanionKeepsEigenvalues) {
  // (z - 0.5)^3: a triple root, so the eigenvalues are only accurate to about eps^(1/3).
  Matrix c(3, 3);
  c << 1.5, -0.75, 0.125, 1, 0, 0, 0, 1, 0;
  const SpectralInfo s = eigen(c);
  EXPECT_NEAR(s.spectral_radius, 0.5, 1e-4);
  EXPECT_FALSE(s.diagonalizable);
}

TEST(Eigen, RejectsNonFiniteAndNonSquare) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = std::nan("");
  EXPECT_THROW(eigen(a), Error);
  EXPECT_THROW(eigen(Matrix::Zero(2, 3)), Error);
}

TEST(Eigen, RadiusMatchesGelfandOracle) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_matrix(rng, 4, 4);
    const double rho = eigen(a).spectral_radius;
    const Matrix p = matrix_power(Matrix(a / rho), 400);
    // ||(A/rho)^k||^{1/k} -> 1
    EXPECT_NEAR(std::pow(p.norm(), 1.0 / 400.0), 1.0, 0.02);
  }
}

TEST(Eigen, ResidualAndConjugatePairs) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = random_matrix(rng, 5, 5);
    const SpectralInfo s = eigen(a);
    EXPECT_LE(s.residual, kResidualTol * std::max(1.0, a.norm()));
    EXPECT_TRUE(conjugate_pairs_matched(s.eigenvalues));
  }
}

TEST(Schur, UpperTriangularIsIdentityTransform) {
  Matrix a(3, 3);
  a << 0.1, 2.0, -1.0, 0.0, 0.4, 3.0, 0.0, 0.0, -0.7;
  const SchurForm f = schur_triangularize(a);
  EXPECT_TRUE(f.U.isApprox(CMatrix::Identity(3, 3)));
  EXPECT_TRUE(f.Delta.real().isApprox(a));
}

TEST(Schur, SymmetricGivesDiagonal) {
  std::mt19937_64 rng(3);
  const Matrix s = random_spd(rng, 4);
  const SchurForm f = schur_triangularize(s);
  CMatrix off = f.Delta;
  off.diagonal().setZero();
  EXPECT_LE(off.norm(), 1e-10 * s.norm());
}

TEST(Schur, RandomResidualAndUnitarity) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = random_with_radius(rng, 4, 0.9);
    const SchurForm f = schur_triangularize(a);
    EXPECT_LE((a.cast<Complex>() - f.U * f.Delta * f.U.adjoint()).norm(), 1e-10 * a.norm());
    EXPECT_LE((f.U.adjoint() * f.U - CMatrix::Identity(4, 4)).norm(), 1e-10);
    EXPECT_TRUE(f.Delta.triangularView<Eigen::StrictlyLower>().toDenseMatrix().isZero(0.0));
    const auto a_mods = sorted_moduli(eigen(a).eigenvalues);
    const auto d_mods = sorted_moduli(f.Delta.diagonal());
    for (std::size_t i = 0; i < a_mods.size(); ++i) EXPECT_NEAR(a_mods[i], d_mods[i], 1e-8);
  }
}

TEST(StarNorm, DiagonalUnchangedByScaling) {
  Matrix q = Matrix::Zero(2, 2);
  q.diagonal() << 0.5, 0.9;
  for (double k : {9.5, 15.0, 400.0}) EXPECT_NEAR(build_star_norm(q, FixedKappa{k}).value, 0.9, 1e-15);
}

TEST(StarNorm, JordanBlockHandValue) {
  Matrix q(2, 2);
  q << 0.5, 1.0, 0.0, 0.5;
  const StarNorm s = build_star_norm(q, FixedKappa{6.0});
  EXPECT_NEAR(s.value, 0.5 + 1.0 / 6.0, 1e-15);
}

TEST(StarNorm, NilpotentHandValue) {
  Matrix q(2, 2);
  q << 0.0, 1.0, 0.0, 0.0;
  const StarNorm s = build_star_norm(q, FixedKappa{2.0});
  EXPECT_NEAR(s.value, 0.5, 1e-15);
  EXPECT_EQ(s.spectral_radius, 0.0);
}

TEST(StarNorm, MatchesExplicitScalingOracle) {
  std::mt19937_64 rng(5);
  for (int d = 2; d <= 5; ++d) {
    const Matrix q = random_with_radius(rng, d, 0.8);
    const StarNorm s = build_star_norm(q);
    EXPECT_NEAR(s.value, star_oracle(s, q), 1e-10 * std::max(1.0, s.value));
    const Matrix a = random_matrix(rng, d, d);
    EXPECT_NEAR(s(a), star_oracle(s, a), 1e-10 * std::max(1.0, s(a)));
    const CMatrix sim = s.similarity();
    EXPECT_LE((sim * s.similarity_inverse() - CMatrix::Identity(d, d)).norm(), 1e-10);
  }
}

TEST(StarNorm, AutoKappaIsTwiceThreshold) {
  Matrix q(2, 2);
  q << 0.5, 1.0, 0.0, 0.5;
  const StarNorm s = build_star_norm(q);
  EXPECT_DOUBLE_EQ(s.threshold, 3.0);  // ||Delta||_1 / (1 - rho) = 1.5 / 0.5
  EXPECT_DOUBLE_EQ(s.kappa, 6.0);
}

TEST(StarNorm, Errors) {
  Matrix unstable = Matrix::Identity(2, 2) * 1.1;
  try {
    build_star_norm(unstable);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSchurStable);
  }
  Matrix q(2, 2);
  q << 0.5, 1.0, 0.0, 0.5;
  try {
    build_star_norm(q, FixedKappa{2.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::KappaBelowThreshold);
  }
}

TEST(StarNorm, ContractionAndNormInequalities) {
  std::mt19937_64 rng(6);
  for (int d = 2; d <= 5; ++d) {
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix q = random_with_radius(rng, d, 0.95);
      const StarNorm s = build_star_norm(q);
      EXPECT_LT(s.value, 1.0);
      EXPECT_GE(s.value, s.spectral_radius - 1e-12);
      EXPECT_GT(s.kappa, s.threshold);
      EXPECT_LE(s.C_star, std::pow(d, 2.5) * std::pow(s.kappa, d - 1.0) * (1 + 1e-12));
      for (int k = 0; k < 10; ++k) {
        const Matrix a = random_matrix(rng, d, d), b = random_matrix(rng, d, d);
        const Vector x = random_matrix(rng, d, 1).col(0);
        const double sa = s(a);
        EXPECT_LE((a * x).norm(), s.K_d * sa * x.norm() * (1 + 1e-12));
        EXPECT_LE(a.norm(), s.C_star * sa * (1 + 1e-12));
        EXPECT_LE(s(a * b), sa * s(b) * (1 + 1e-12));
      }
    }
  }
}

TEST(StarNorm, PowersContract) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix q = random_with_radius(rng, 3, 0.9);
    const StarNorm s = build_star_norm(q);
    Matrix p = q;
    for (int t = 1; t <= 50; ++t) {
      EXPECT_LE(s(p), std::pow(s.value, t) * (1 + 1e-10) + 1e-300);
      p = p * q;
    }
  }
}

TEST(StarNorm, OptimizedKappaNoWorseThanAuto) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix q = random_with_radius(rng, 3, 0.8);
    const StarNorm a = build_star_norm(q);
    const StarNorm o = build_star_norm(q, OptimizeAt{20, 1.0});
    const auto objective = [](const StarNorm& s) {
      return s.K_d * std::pow(s.value, 21) / (1 - s.value);
    };
    EXPECT_LE(objective(o), objective(a) * (1 + 1e-8));
    EXPECT_GT(o.kappa, o.threshold);
  }
}

TEST(StationaryCovariance, ScalarAr1) {
  const Matrix s = stationary_covariance(Matrix::Constant(1, 1, 0.5), Matrix::Constant(1, 1, 1.0));
  EXPECT_NEAR(s(0, 0), 4.0 / 3.0, 1e-14);
}

TEST(StationaryCovariance, ZeroQ) {
  std::mt19937_64 rng(9);
  const Matrix v = random_spd(rng, 3);
  EXPECT_TRUE(stationary_covariance(Matrix::Zero(3, 3), v).isApprox(v, 1e-15));
}

TEST(StationaryCovariance, ResidualAndNeumannTail) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix q = random_with_radius(rng, 3, 0.85);
    const Matrix v = random_spd(rng, 3);
    const Matrix s = stationary_covariance(q, v);
    EXPECT_LE((s - q * s * q.transpose() - v).norm(), 1e-10 * std::max(1.0, s.norm()));
    EXPECT_LE((s - s.transpose()).norm(), 1e-14 * s.norm());
    const StarNorm star = build_star_norm(q);
    Matrix partial = Matrix::Zero(3, 3), qj = Matrix::Identity(3, 3);
    const int big_t = 40;
    for (int j = 0; j < big_t; ++j) {
      partial += qj * v * qj.transpose();
      qj = q * qj;
    }
    // tail bound ||sum_{j >= T} Q^j V Q^jT||_F <= C_*^2 ||V||_F s^{2T} / (1 - s^2)
    const double tail =
        star.C_star * star.C_star * v.norm() * std::pow(star.value, 2 * big_t) / (1 - star.value * star.value);
    EXPECT_LE((s - partial).norm(), tail * (1 + 1e-9) + 1e-12);
  }
}

TEST(StationaryCovariance, RejectsUnstable) {
  EXPECT_THROW(stationary_covariance(Matrix::Constant(1, 1, 1.0), Matrix::Constant(1, 1, 1.0)), Error);
}

TEST(PsdSqrt, DiagonalAndIdentity) {
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 4.0, 9.0;
  const Matrix r = psd_sqrt(d);
  EXPECT_NEAR(r(0, 0), 2.0, 1e-15);
  EXPECT_NEAR(r(1, 1), 3.0, 1e-15);
  EXPECT_TRUE(psd_sqrt(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
}

TEST(PsdSqrt, Reconstruction) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = random_matrix(rng, 4, 4);
    const Matrix s = m * m.transpose();
    const Matrix r = psd_sqrt(s);
    EXPECT_LE((r * r - s).norm(), 1e-10 * std::max(1.0, s.norm()));
    EXPECT_LE((r - r.transpose()).norm(), 1e-12 * std::max(1.0, r.norm()));
    EXPECT_GE(smallest_eigenvalue_sym(symmetrized(r)), -1e-10);
    EXPECT_LE((psd_sqrt(Matrix(r * r)) - r).norm(), 1e-8 * std::max(1.0, r.norm()));
  }
}

TEST(PsdSqrt, Errors) {
  Matrix ns(2, 2);
  ns << 1.0, 0.5, 0.0, 1.0;
  try {
    psd_sqrt(ns);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSymmetric);
  }
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -0.5;
  try {
    psd_sqrt(neg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPSD);
  }
}

TEST(SmallestEigenvalue, Examples) {
  EXPECT_NEAR(smallest_eigenvalue_sym(Matrix::Constant(1, 1, 4.0 / 3.0)), 4.0 / 3.0, 1e-15);
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 1.0, 5.0;
  EXPECT_NEAR(smallest_eigenvalue_sym(d), 1.0, 1e-15);
  std::mt19937_64 rng(12);
  const Matrix m = random_matrix(rng, 4, 4);
  EXPECT_GE(smallest_eigenvalue_sym(Matrix(m * m.transpose() + 0.3 * Matrix::Identity(4, 4))), 0.3 - 1e-12);
}

TEST(MatrixPower, MatchesRepeatedProduct) {
  std::mt19937_64 rng(13);
  const Matrix q = random_with_radius(rng, 3, 0.9);
  Matrix p = Matrix::Identity(3, 3);
  for (int t = 0; t <= 17; ++t) {
    EXPECT_LE((matrix_power(q, t) - p).norm(), 1e-12);
    p = p * q;
  }
}
