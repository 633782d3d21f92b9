// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ergobound/bounds.hpp"
#include "ergobound/errors.hpp"
#include "ergobound/linalg.hpp"
#include "ergobound/model.hpp"
#include "ergobound/serialization.hpp"
#include "ergobound/sim.hpp"
#include "ergobound/stability.hpp"
#include "ergobound/wasserstein.hpp"

namespace ergobound::cli {

enum ExitCode : int { kOk = 0, kParse = 2, kModel = 3, kPrecondition = 4, kValidation = 5, kIo = 6 };

struct Exit {
  int code;
  std::string message;
};

struct ModelArgs {
  std::string file;
  std::string phi, theta, a;
  std::string noise = "gaussian";
  double noise_scale = 1.0;
  double noise_mean = 0.0;
  double nu = 5.0;

  Json echo() const {
    Json j;
    if (!file.empty()) j["model"] = file;
    if (!phi.empty()) j["phi"] = phi;
    if (!theta.empty()) j["theta"] = theta;
    if (!a.empty()) j["a"] = a;
    j["noise"] = noise;
    j["noise_scale"] = noise_scale;
    j["noise_mean"] = noise_mean;
    j["nu"] = nu;
    return j;
  }
};

struct BoundArgs {
  std::string flavor = "generic";
  std::optional<double> r;
  long t_max = 50;
  std::string x;
  std::string v;
  std::string kappa_policy = "auto";
  std::string mode;
  long n = 1;
  std::uint64_t seed = 0;
  std::string out;

  Json echo() const {
    Json j{{"flavor", flavor}, {"t_max", t_max}, {"kappa_policy", kappa_policy}, {"n", n}, {"seed", seed}};
    if (r) j["r"] = *r;
    if (!x.empty()) j["x"] = x;
    if (!v.empty()) j["v"] = v;
    if (!mode.empty()) j["mode"] = mode;
    if (!out.empty()) j["out"] = out;
    return j;
  }
};

struct ValidateArgs {
  std::size_t n_samples = 10000;
  int n_directions = 256;
  double eps = 1e-3;

  Json echo() const { return {{"n_samples", n_samples}, {"n_directions", n_directions}, {"eps", eps}}; }
};

struct SimulateArgs {
  std::size_t paths = 100;
  long horizon = 10;
  std::uint64_t seed = 0;
  std::string x;
  std::string out;

  Json echo() const { return {{"paths", paths}, {"horizon", horizon}, {"seed", seed}, {"x", x}, {"out", out}}; }
};

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

inline std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v))
      throw Exit{kParse, "cannot parse '" + item + "' in " + what};
    out.push_back(v);
  }
  return out;
}

inline Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Exit{kIo, "cannot open '" + path + "'"};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Exit{kIo, "cannot write '" + path + "'"};
  out << body;
  if (!out) throw Exit{kIo, "write failed for '" + path + "'"};
}

inline NoiseSpec scalar_noise(const ModelArgs& a) {
  const Vector loc = Vector::Constant(1, a.noise_mean);
  const Vector s = Vector::Constant(1, a.noise_scale);
  NoiseSpec n;
  switch (parse_family(a.noise)) {
    case NoiseFamily::gaussian: return NoiseSpec::gaussian1(a.noise_mean, a.noise_scale * a.noise_scale);
    case NoiseFamily::laplace: return NoiseSpec::laplace(loc, s);
    case NoiseFamily::student_t:
      n = NoiseSpec::student_t(a.nu, s);
      n.location = loc;
      return n;
    case NoiseFamily::uniform:
      n = NoiseSpec::uniform(s);
      n.location = loc;
      return n;
    case NoiseFamily::point_mass: return NoiseSpec::point_mass(loc);
  }
  return n;
}

/// Model from --model or from inline coefficients. Parse failures exit 2, invalid models exit 3.
inline StateSpaceModel load_model(const ModelArgs& a) {
  if (!a.file.empty()) {
    Json j;
    try {
      j = Json::parse(read_file(a.file));
    } catch (const Json::exception& e) {
      throw Exit{kParse, std::string("model file is not valid JSON: ") + e.what()};
    }
    try {
      return model_from_json(j);
    } catch (const Json::exception& e) {
      throw Exit{kParse, std::string("model file has wrong types: ") + e.what()};
    } catch (const Error& e) {
      throw Exit{kModel, e.what()};
    }
  }
  if (a.phi.empty()) throw Exit{kParse, "need --model or --phi"};
  const auto phi = parse_list(a.phi, "--phi");
  const auto theta = parse_list(a.theta, "--theta");
  const auto av = parse_list(a.a, "--a");
  try {
    const NoiseSpec n = scalar_noise(a);
    return theta.empty() ? ar_state_space(phi, av, n) : arma_state_space(phi, theta, n);
  } catch (const Error& e) {
    throw Exit{kModel, e.what()};
  }
}

inline Vector start_vector(const std::string& s, Eigen::Index d) {
  if (s.empty()) return Vector::Zero(d);
  const Vector x = to_vector(parse_list(s, "--x"));
  if (x.size() != d) throw Exit{kParse, "--x needs " + std::to_string(d) + " entries"};
  return x;
}

inline linalg::KappaPolicy parse_kappa_policy(const std::string& s) {
  const auto colon = s.find(':');
  const std::string head = s.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : s.substr(colon + 1);
  const auto arg = [&]() {
    const auto v = parse_list(tail, "--kappa-policy");
    if (v.size() != 1) throw Exit{kParse, "--kappa-policy " + head + " needs one value"};
    return v[0];
  };
  if (head == "auto") return tail.empty() ? linalg::AutoMargin{} : linalg::AutoMargin{arg()};
  if (head == "fixed") return linalg::FixedKappa{arg()};
  if (head == "optimize") return linalg::OptimizeAt{static_cast<long>(arg())};
  throw Exit{kParse, "unknown --kappa-policy '" + s + "'"};
}

inline Json manifest(const std::string& command, const StateSpaceModel& m, const Json& config, std::uint64_t seed) {
  return {{"command", command},
          {"model_digest", model_digest(m)},
          {"config", config},
          {"version", kArtifactVersion},
          {"seed", seed}};
}

inline void check_flavor(const std::string& s) {
  try {
    parse_flavor(s);
  } catch (const Error& e) {
    throw Exit{kParse, e.what()};
  }
}

inline bool is_gauss_flavor(Flavor f) {
  return f == Flavor::exact_ar1 || f == Flavor::gauss_affine || f == Flavor::projected || f == Flavor::sliced_gauss;
}

/// Evaluates one flavor across t = 0..t_max with shared constants.
class BoundSweep {
 public:
  BoundSweep(const StateSpaceModel& m, const BoundArgs& a)
      : m_(m), args_(a), flavor_(parse_flavor(a.flavor)), moments_(m, kMomentSeed ^ a.seed) {
    r_ = a.r ? *a.r : (is_gauss_flavor(flavor_) ? 2.0 : 1.0);
    require(r_ >= 1.0, ErrorCode::InvalidArgument, "--r must be >= 1");
    x_ = start_vector(a.x, m.dim());
    v_ = a.v.empty() ? Vector(Vector::Unit(m.dim(), 0)) : start_vector(a.v, m.dim());
    if (flavor_ == Flavor::exact_ar1) {
      require(m.dim() == 1, ErrorCode::DimensionMismatch, "exact_ar1 needs d = 1");
      require_gaussian(m);
      require(m.drift_mean().norm() == 0.0, ErrorCode::InvalidArgument, "exact_ar1 needs centred noise");
      require(r_ == 2.0, ErrorCode::InvalidArgument, "exact_ar1 is the r = 2 distance");
    } else if (flavor_ == Flavor::generic_diag) {
      spec_ = linalg::eigen(m.Q);
    } else {
      star_ = linalg::build_star_norm(m.Q, parse_kappa_policy(a.kappa_policy));
    }
    if (!a.mode.empty()) {
      if (a.mode == "as_printed") {
        ha_ = HemmenAndo::as_printed;
        sliced_ = SlicedMode::as_printed;
      } else if (a.mode == "sqrt_lambda" || a.mode == "jensen") {
        ha_ = HemmenAndo::sqrt_lambda;
        sliced_ = SlicedMode::jensen_consistent;
      } else {
        throw Exit{kParse, "unknown --mode '" + a.mode + "'"};
      }
    } else {
      sliced_ = flavor_ == Flavor::sliced_gauss ? SlicedMode::jensen_consistent : SlicedMode::as_printed;
    }
  }

  double r() const { return r_; }
  Flavor flavor() const { return flavor_; }
  const Vector& x() const { return x_; }
  const Vector& v() const { return v_; }

  BoundReport at(long t) {
    const Eigen::Index d = m_.dim();
    switch (flavor_) {
      case Flavor::exact_ar1: {
        const double q = m_.Q(0, 0), sigma = std::sqrt(m_.drift_covariance()(0, 0));
        BoundReport rep;
        rep.t = t;
        rep.flavor = flavor_;
        rep.order = 2.0;
        rep.lower = rep.upper = exact_w2_ar1(q, sigma, x_(0), t);
        std::tie(rep.mean_part, rep.noise_part) = exact_ar1_parts(q, sigma, x_(0), t);
        rep.chain = {{"exact", rep.upper}};
        rep.finish();
        return rep;
      }
      case Flavor::gauss_affine:
        return gaussian_affine_bounds(m_, Matrix::Identity(d, d), x_, r_, t, *star_, ha_);
      case Flavor::projected: return projected_bounds(m_, v_, x_, r_, t, *star_);
      case Flavor::sliced_gauss: return sliced_gauss_bounds(m_, x_, r_, t, *star_, sliced_);
      case Flavor::generic: return generic_bounds(m_, x_, r_, t, *star_, moments_);
      case Flavor::generic_diag: return diagonalizable_bounds(m_, x_, r_, t, *spec_, moments_);
      case Flavor::sliced_generic: return sliced_generic_bounds(m_, x_, r_, t, *star_, moments_, sliced_);
      case Flavor::parallel: {
        const BoundReport one = generic_bounds(m_, x_, r_, t, *star_, moments_);
        std::optional<double> exact;
        if (r_ == 2.0 && m_.noise.family == NoiseFamily::gaussian) {
          const auto [lt, li] = gaussian_laws(m_, Matrix::Identity(d, d), x_, t);
          exact = gaussian_w2(lt, li);
        }
        return parallel_bounds(one, args_.n, r_, exact);
      }
      case Flavor::empirical_mean: return empirical_mean_bounds(m_, args_.n, x_, r_, t, *star_, moments_);
    }
    fail(ErrorCode::InvalidArgument, "unhandled flavor");
  }

 private:
  const StateSpaceModel& m_;
  BoundArgs args_;
  Flavor flavor_;
  NoiseMoments moments_;
  double r_ = 1.0;
  Vector x_, v_;
  std::optional<linalg::StarNorm> star_;
  std::optional<linalg::SpectralInfo> spec_;
  HemmenAndo ha_ = HemmenAndo::sqrt_lambda;
  SlicedMode sliced_ = SlicedMode::as_printed;
};

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline int cmd_stability(const ModelArgs& ma, std::ostream& out) {
  const StateSpaceModel m = load_model(ma);
  std::vector<double> phi;
  if (const auto* ar = std::get_if<ArProvenance>(&m.provenance)) phi = ar->phi;
  if (const auto* arma = std::get_if<ArmaProvenance>(&m.provenance)) phi = arma->phi;

  StabilityVerdict v;
  try {
    v = phi.empty() ? is_schur_stable(m.Q) : ar_stability(phi);
    if (!phi.empty() && std::holds_alternative<ArmaProvenance>(m.provenance)) {
      const StabilityVerdict full = is_schur_stable(m.Q);
      v.spectral_radius = full.spectral_radius;
      v.margin = full.margin;
    }
  } catch (const Error& e) {
    throw Exit{kModel, e.what()};
  }
  Json j;
  j["stable"] = v.stable;
  j["spectral_radius"] = v.spectral_radius;
  j["margin"] = v.margin;
  j["boundary"] = v.boundary;
  j["region"] = v.region_label ? Json(std::string(region_name(*v.region_label))) : Json(nullptr);
  if (phi.size() == 2) j["ar2_region"] = std::string(ar2_region_name(ar2_region(phi[0], phi[1])));
  Json flags = Json::array();
  if (!phi.empty()) {
    const SufficientFlags f = sufficient_tests(phi);
    if (f.enestrom_kakeya) flags.push_back("enestrom_kakeya");
    if (f.cohn) flags.push_back("cohn");
    if (f.p3_sufficient) flags.push_back("p3_sufficient");
    if (f.p4_sufficient) flags.push_back("p4_sufficient");
  }
  j["flags"] = flags;
  j["model_digest"] = model_digest(m);
  out << j.dump() << '\n';
  return kOk;
}

inline int cmd_diagnose(const ModelArgs& ma, double r, std::ostream& out) {
  const StateSpaceModel m = load_model(ma);
  const ModelDiagnostics d = validate_model(m, r);
  Json j{{"spectral_radius", d.spectral_radius},
         {"stable", d.stable},
         {"r", d.r},
         {"r_max", std::isinf(d.r_max) ? Json("inf") : Json(d.r_max)},
         {"moment_available", d.moment_available},
         {"gaussian", d.gaussian},
         {"stationary_nonsingular", d.stationary_nonsingular},
         {"gauss_flavors_applicable", d.gauss_flavors_applicable},
         {"flags", d.flags},
         {"model_digest", model_digest(m)}};
  out << j.dump() << '\n';
  return kOk;
}

inline int cmd_bounds(const ModelArgs& ma, const BoundArgs& ba, std::ostream& out) {
  const StateSpaceModel m = load_model(ma);
  if (ba.t_max < 0) throw Exit{kParse, "--t-max must be >= 0"};
  check_flavor(ba.flavor);
  std::ostringstream csv;
  csv << "t,lower,upper,mean_part,noise_part,flavor,r,star_norm,K_d,C_star,lambda_minus\n";
  try {
    BoundSweep sweep(m, ba);
    for (long t = 0; t <= ba.t_max; ++t) {
      const BoundReport rep = sweep.at(t);
      const BoundConstants& c = rep.constants;
      csv << t << ',' << fmt17(rep.lower) << ',' << fmt17(rep.upper) << ',' << fmt17(rep.mean_part) << ','
          << fmt17(rep.noise_part) << ',' << flavor_name(rep.flavor) << ',' << fmt17(sweep.r()) << ','
          << fmt17(c.star) << ',' << fmt17(c.K_d) << ',' << fmt17(c.C_star) << ',' << fmt17(c.lambda_minus) << '\n';
    }
  } catch (const Error& e) {
    throw Exit{kPrecondition, e.what()};
  }
  if (ba.out.empty()) {
    out << csv.str();
  } else {
    write_file(ba.out, csv.str());
    Json cfg{{"model", ma.echo()}, {"bounds", ba.echo()}};
    write_file(ba.out + ".manifest.json", manifest("bounds", m, cfg, ba.seed).dump(2) + "\n");
  }
  return kOk;
}

namespace detail {

inline double w1d_columns(const Matrix& xs, const Matrix& ys, double r) {
  const Vector a = xs.col(0), b = ys.col(0);
  return empirical_w1d({a.data(), a.data() + a.size()}, {b.data(), b.data() + b.size()}, r).value;
}

}  // namespace detail

inline int cmd_validate(const ModelArgs& ma, const BoundArgs& ba, const ValidateArgs& va, std::ostream& out,
                        std::ostream& err) {
  const StateSpaceModel m = load_model(ma);
  if (ba.t_max < 0) throw Exit{kParse, "--t-max must be >= 0"};
  check_flavor(ba.flavor);
  std::ostringstream csv;
  csv << "t,lower,distance,std_error,upper,sandwich_ok\n";
  long violations = 0;
  double worst = 0.0;
  std::string truth_kind;
  try {
    BoundSweep sweep(m, ba);
    const Flavor f = sweep.flavor();
    const Eigen::Index d = m.dim();
    const double r = sweep.r();
    const bool exact_truth = is_gauss_flavor(f);
    if (exact_truth) require_gaussian(m);

    std::optional<SampleEnsemble> paths, stat;
    std::optional<SlicedProjector> projector;
    std::optional<Matrix> dirs;
    const bool sliced = f == Flavor::sliced_generic || f == Flavor::sliced_gauss;
    if (sliced) require(d >= 2, ErrorCode::InvalidArgument, "sliced flavors need d >= 2");
    const SlicedOptions sopt{r, va.n_directions, ba.seed, d == 2, SlicedConvention::normalized};
    if (!exact_truth) {
      require(f != Flavor::parallel && !(f == Flavor::empirical_mean && ba.n > 1), ErrorCode::InvalidArgument,
              "validate supports single-copy flavors");
      require(sliced || d == 1, ErrorCode::InvalidArgument,
              "empirical W_r is only available in d = 1; use sliced_generic for d >= 2");
      truth_kind = sliced ? "empirical_sliced" : "empirical_1d";
      SimConfig cfg;
      cfg.n_paths = va.n_samples;
      cfg.horizon = std::max(1L, ba.t_max);
      cfg.seed = ba.seed;
      paths = simulate_paths(m, sweep.x(), cfg);
      stat = sample_stationary(m, va.n_samples, ba.seed, va.eps);
      if (sliced) projector.emplace(stat->samples[0], sopt);
    } else {
      truth_kind = "exact_gaussian";
      if (f == Flavor::sliced_gauss) dirs = slicing_directions(static_cast<int>(d), va.n_directions, ba.seed, d == 2);
    }

    for (long t = 0; t <= ba.t_max; ++t) {
      const BoundReport rep = sweep.at(t);
      double dist = 0.0, se = 0.0;
      if (exact_truth) {
        const auto [lt, li] = gaussian_laws(m, Matrix::Identity(d, d), sweep.x(), t);
        const auto proj1d = [&](const Vector& u) {
          return gaussian_wr_1d(u.dot(lt.mean), std::sqrt(std::max(u.dot(lt.covariance * u), 0.0)), u.dot(li.mean),
                                std::sqrt(std::max(u.dot(li.covariance * u), 0.0)), r);
        };
        if (f == Flavor::exact_ar1) {
          dist = rep.upper;
        } else if (f == Flavor::projected) {
          dist = proj1d(sweep.v());
        } else if (f == Flavor::sliced_gauss) {
          std::vector<double> per;
          for (Eigen::Index k = 0; k < dirs->cols(); ++k) per.push_back(std::pow(proj1d(dirs->col(k)), r));
          const EmpiricalEstimate e =
              ergobound::detail::aggregate_sliced(per, r, static_cast<int>(d), SlicedConvention::normalized, d != 2);
          dist = e.value;
          se = e.std_error;
        } else if (r == 2.0) {
          dist = gaussian_w2(lt, li);
        } else {
          require(d == 1, ErrorCode::InvalidArgument, "exact W_r for r != 2 needs d = 1");
          dist = proj1d(Vector::Ones(1));
        }
      } else {
        const auto slot = static_cast<std::size_t>(t);
        const Matrix& xs = paths->samples[slot];
        if (sliced) {
          const EmpiricalEstimate e = projector->distance(xs);
          dist = e.value;
          se = e.std_error;
        } else {
          dist = detail::w1d_columns(xs, stat->samples[0], r);
          se = batch_std_error(xs, stat->samples[0],
                                       [r](const Matrix& a, const Matrix& b) { return detail::w1d_columns(a, b, r); });
        }
      }
      const double tol = 1e-12 * std::max(1.0, rep.upper);
      const bool ok = dist >= rep.lower - 3.0 * se - tol && dist <= rep.upper + 3.0 * se + tol;
      if (!ok) ++violations;
      if (rep.upper > 0.0) worst = std::max(worst, dist / rep.upper);
      csv << t << ',' << fmt17(rep.lower) << ',' << fmt17(dist) << ',' << fmt17(se) << ',' << fmt17(rep.upper) << ','
          << (ok ? 1 : 0) << '\n';
    }
  } catch (const Error& e) {
    throw Exit{kPrecondition, e.what()};
  }

  Json cfg{{"model", ma.echo()}, {"bounds", ba.echo()}, {"validate", va.echo()}};
  Json summary{{"flavor", ba.flavor},    {"truth", truth_kind},          {"rows", ba.t_max + 1},
               {"violations", violations}, {"max_distance_over_upper", worst},
               {"manifest", manifest("validate", m, cfg, ba.seed)}};
  if (ba.out.empty()) {
    out << csv.str();
    err << summary.dump() << '\n';
  } else {
    write_file(ba.out, csv.str());
    write_file(ba.out + ".summary.json", summary.dump(2) + "\n");
    write_file(ba.out + ".manifest.json", manifest("validate", m, cfg, ba.seed).dump(2) + "\n");
  }
  if (violations > 0) throw Exit{kValidation, std::to_string(violations) + " sandwich violation(s)"};
  return kOk;
}

inline int cmd_simulate(const ModelArgs& ma, const SimulateArgs& sa, std::ostream& out) {
  const StateSpaceModel m = load_model(ma);
  if (sa.out.empty()) throw Exit{kParse, "--out is required"};
  SampleEnsemble ens;
  try {
    SimConfig cfg;
    cfg.n_paths = sa.paths;
    cfg.horizon = sa.horizon;
    cfg.seed = sa.seed;
    ens = simulate_paths(m, start_vector(sa.x, m.dim()), cfg);
  } catch (const Error& e) {
    throw Exit{kPrecondition, e.what()};
  }
  std::ostringstream csv;
  csv << "path,t";
  for (Eigen::Index i = 0; i < m.dim(); ++i) csv << ",x" << (i + 1);
  csv << '\n';
  for (std::size_t p = 0; p < sa.paths; ++p) {
    for (std::size_t k = 0; k < ens.times.size(); ++k) {
      csv << p << ',' << ens.times[k];
      for (Eigen::Index i = 0; i < m.dim(); ++i) csv << ',' << fmt17(ens.samples[k](static_cast<Eigen::Index>(p), i));
      csv << '\n';
    }
  }
  write_file(sa.out, csv.str());
  Json cfg{{"model", ma.echo()}, {"simulate", sa.echo()}};
  write_file(sa.out + ".manifest.json", manifest("simulate", m, cfg, sa.seed).dump(2) + "\n");
  out << sa.out << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline void add_model_options(CLI::App* sub, ModelArgs& ma) {
  sub->add_option("--model", ma.file, "model JSON file");
  sub->add_option("--phi", ma.phi, "AR coefficients, comma separated");
  sub->add_option("--theta", ma.theta, "MA coefficients, comma separated (gives ARMA)");
  sub->add_option("--a", ma.a, "AR diagonal Sigma entries a_2..a_p");
  sub->add_option("--noise", ma.noise, "gaussian|laplace|student_t|uniform|point_mass");
  sub->add_option("--noise-scale", ma.noise_scale, "std dev, Laplace b, t scale or uniform half-width");
  sub->add_option("--noise-mean", ma.noise_mean, "noise location");
  sub->add_option("--nu", ma.nu, "Student-t degrees of freedom");
}

inline void add_bound_options(CLI::App* sub, BoundArgs& ba) {
  sub->add_option("--flavor", ba.flavor, "bound flavor");
  sub->add_option("--r", ba.r, "order r (or p)");
  sub->add_option("--t-max", ba.t_max, "last time step");
  sub->add_option("--x", ba.x, "start vector, comma separated");
  sub->add_option("--v", ba.v, "projection direction for the projected flavor");
  sub->add_option("--kappa-policy", ba.kappa_policy, "auto[:margin] | fixed:kappa | optimize:t");
  sub->add_option("--mode", ba.mode, "sqrt_lambda|jensen|as_printed");
  sub->add_option("--n", ba.n, "number of copies (parallel, empirical_mean)");
  sub->add_option("--seed", ba.seed, "seed");
  sub->add_option("--out", ba.out, "output CSV (stdout if absent)");
}

/// Runs the CLI on args (without the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ergodicity bounds for stable autoregressive processes", "ergobound"};
  app.require_subcommand(1);
  ModelArgs ma;
  BoundArgs ba;
  ValidateArgs va;
  SimulateArgs sa;
  double diag_r = 2.0;

  auto* stab = app.add_subcommand("stability", "stability verdict as JSON");
  add_model_options(stab, ma);
  auto* diag = app.add_subcommand("diagnose", "model diagnostics as JSON");
  add_model_options(diag, ma);
  diag->add_option("--r", diag_r, "moment order");
  auto* bnd = app.add_subcommand("bounds", "bound sweep as CSV");
  add_model_options(bnd, ma);
  add_bound_options(bnd, ba);
  auto* val = app.add_subcommand("validate", "bounds against exact or Monte Carlo distances");
  add_model_options(val, ma);
  add_bound_options(val, ba);
  val->add_option("--n-samples", va.n_samples, "Monte Carlo sample size");
  val->add_option("--n-directions", va.n_directions, "slicing directions");
  val->add_option("--eps", va.eps, "stationary truncation tolerance");
  auto* sim = app.add_subcommand("simulate", "path ensemble as CSV");
  add_model_options(sim, ma);
  sim->add_option("--paths", sa.paths, "number of paths");
  sim->add_option("--horizon", sa.horizon, "number of steps");
  sim->add_option("--seed", sa.seed, "seed");
  sim->add_option("--x", sa.x, "start vector");
  sim->add_option("--out", sa.out, "output CSV")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (stab->parsed()) return cmd_stability(ma, out);
    if (diag->parsed()) return cmd_diagnose(ma, diag_r, out);
    if (bnd->parsed()) return cmd_bounds(ma, ba, out);
    if (val->parsed()) return cmd_validate(ma, ba, va, out, err);
    if (sim->parsed()) return cmd_simulate(ma, sa, out);
  } catch (const Exit& e) {
    err << "error: " << e.message << '\n';
    return e.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kPrecondition;
  }
  return kParse;
}

}  // namespace ergobound::cli
