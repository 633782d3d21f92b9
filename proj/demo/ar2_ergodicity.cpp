// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

// Convergence of an AR(2) process to its stationary law: Gaussian bounds
// against the exact W_2 distance, and Laplace-driven bounds against a
// sliced Monte Carlo estimate.

#include <cstdio>

#include "ergobound/ergobound.hpp"

using namespace ergobound;

int main() {
  const Vector x = (Vector(2) << 3.0, -1.0).finished();

  const StateSpaceModel gauss = ar_state_space({1.2, -0.5}, {0.0}, NoiseSpec::gaussian1(0.0, 1.0));
  const linalg::StarNorm star = linalg::build_star_norm(gauss.Q);
  std::printf("rho(Q) = %.6f  ||Q||_* = %.6f  K_d = %.4f  C_* = %.4f\n\n", star.spectral_radius, star.value,
              star.K_d, star.C_star);

  std::printf("Gaussian noise, r = 2\n%4s %12s %12s %12s\n", "t", "lower", "W2 exact", "upper");
  for (long t : {0L, 5L, 10L, 20L, 40L}) {
    const BoundReport rep = gaussian_affine_bounds(gauss, Matrix::Identity(2, 2), x, 2.0, t, star);
    const auto [law_t, law_inf] = gaussian_laws(gauss, Matrix::Identity(2, 2), x, t);
    std::printf("%4ld %12.6g %12.6g %12.6g\n", t, rep.lower, gaussian_w2(law_t, law_inf), rep.upper);
  }

  const StateSpaceModel lap =
      ar_state_space({1.2, -0.5}, {0.0}, NoiseSpec::laplace(Vector::Zero(1), Vector::Constant(1, 0.5)));
  NoiseMoments moments(lap);
  SimConfig cfg;
  cfg.n_paths = 20000;
  cfg.horizon = 30;
  cfg.seed = 11;
  const SampleEnsemble paths = simulate_paths(lap, x, cfg);
  const SampleEnsemble stat = sample_stationary(lap, cfg.n_paths, 11, 1e-3);
  const SlicedProjector proj(stat.samples[0], SlicedOptions{1.0, 128, 11});

  std::printf("\nLaplace noise, sliced W_1 (n = %zu, T = %ld)\n%4s %12s %12s %12s %10s\n", cfg.n_paths,
              stat.truncation, "t", "lower", "estimate", "upper", "stderr");
  for (long t : {0L, 5L, 10L, 20L, 30L}) {
    const BoundReport rep = sliced_generic_bounds(lap, x, 1.0, t, star, moments);
    const EmpiricalEstimate e = proj.distance(paths.samples[static_cast<std::size_t>(t)]);
    std::printf("%4ld %12.6g %12.6g %12.6g %10.2g\n", t, rep.lower, e.value, rep.upper, e.std_error);
  }
  return 0;
}
