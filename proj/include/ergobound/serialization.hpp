// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "ergobound/errors.hpp"
#include "ergobound/linalg.hpp"
#include "ergobound/model.hpp"

namespace ergobound {

using Json = nlohmann::json;

inline constexpr const char* kArtifactVersion = "1.0.0";

/// Round-trip representation with 17 significant digits.
inline std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json to_json_rows(const Matrix& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back(m(i, j));
  return a;
}

inline Json to_json(const std::vector<double>& v) { return Json(v); }

inline double number_at(const Json& j, const std::string& what) {
  require(j.is_number(), ErrorCode::InvalidArgument, what + " must be a number");
  return j.get<double>();
}

inline Vector vector_from(const Json& j, const std::string& what) {
  require(j.is_array(), ErrorCode::InvalidArgument, what + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_at(j[i], what);
  return v;
}

inline std::vector<double> list_from(const Json& j, const std::string& what) {
  const Vector v = vector_from(j, what);
  return {v.data(), v.data() + v.size()};
}

inline Matrix matrix_from(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
  require(j.is_array(), ErrorCode::InvalidArgument, what + " must be a row-major array");
  require(j.size() == static_cast<std::size_t>(rows * cols), ErrorCode::DimensionMismatch,
          what + " needs " + std::to_string(rows * cols) + " entries, got " + std::to_string(j.size()));
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j2 = 0; j2 < cols; ++j2) m(i, j2) = number_at(j[static_cast<std::size_t>(i * cols + j2)], what);
  return m;
}

inline const Json& field(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key), ErrorCode::InvalidArgument, std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace detail

inline Json noise_to_json(const NoiseSpec& n) {
  using detail::to_json;
  Json params;
  switch (n.family) {
    case NoiseFamily::gaussian:
      params["mean"] = to_json(n.location);
      params["cov"] = detail::to_json_rows(n.base_cov);
      break;
    case NoiseFamily::student_t:
      params["nu"] = n.dof;
      [[fallthrough]];
    case NoiseFamily::laplace:
    case NoiseFamily::uniform:
      params["location"] = to_json(n.location);
      params["scale"] = to_json(n.scale);
      break;
    case NoiseFamily::point_mass: params["value"] = to_json(n.location); break;
  }
  Json j;
  j["family"] = std::string(family_name(n.family));
  j["params"] = params;
  j["loading_rows"] = n.loading.rows();
  j["loading"] = detail::to_json_rows(n.loading);
  return j;
}

inline NoiseSpec noise_from_json(const Json& j) {
  const NoiseFamily f = parse_family(detail::field(j, "family").get<std::string>());
  const Json& p = detail::field(j, "params");
  NoiseSpec n;
  switch (f) {
    case NoiseFamily::gaussian: {
      const Vector mean = detail::vector_from(detail::field(p, "mean"), "noise mean");
      n = NoiseSpec::gaussian(mean, detail::matrix_from(detail::field(p, "cov"), mean.size(), mean.size(), "noise cov"));
      break;
    }
    case NoiseFamily::laplace:
      n = NoiseSpec::laplace(detail::vector_from(detail::field(p, "location"), "location"),
                             detail::vector_from(detail::field(p, "scale"), "scale"));
      break;
    case NoiseFamily::student_t: {
      n = NoiseSpec::student_t(detail::number_at(detail::field(p, "nu"), "nu"),
                               detail::vector_from(detail::field(p, "scale"), "scale"));
      if (p.contains("location")) n.location = detail::vector_from(p.at("location"), "location");
      require(n.location.size() == n.scale.size(), ErrorCode::DimensionMismatch, "location/scale sizes differ");
      break;
    }
    case NoiseFamily::uniform: {
      n = NoiseSpec::uniform(detail::vector_from(detail::field(p, "scale"), "scale"));
      if (p.contains("location")) n.location = detail::vector_from(p.at("location"), "location");
      require(n.location.size() == n.scale.size(), ErrorCode::DimensionMismatch, "location/scale sizes differ");
      break;
    }
    case NoiseFamily::point_mass:
      n = NoiseSpec::point_mass(detail::vector_from(detail::field(p, "value"), "value"));
      break;
  }
  if (j.contains("loading")) {
    const auto rows = detail::field(j, "loading_rows").get<Eigen::Index>();
    n = n.lifted(detail::matrix_from(j.at("loading"), rows, n.base_dim(), "loading"));
  }
  return n;
}

inline Json model_to_json(const StateSpaceModel& m) {
  Json j;
  j["d"] = m.dim();
  j["Q"] = detail::to_json_rows(m.Q);
  j["Sigma"] = detail::to_json_rows(m.Sigma);
  j["noise"] = noise_to_json(m.noise);
  Json prov;
  if (const auto* ar = std::get_if<ArProvenance>(&m.provenance)) {
    prov = {{"kind", "ar"}, {"phi", ar->phi}, {"a", ar->a}};
  } else if (const auto* arma = std::get_if<ArmaProvenance>(&m.provenance)) {
    prov = {{"kind", "arma"}, {"phi", arma->phi}, {"theta", arma->theta}};
  } else {
    prov = {{"kind", "raw"}};
  }
  j["provenance"] = prov;
  return j;
}

inline StateSpaceModel model_from_json(const Json& j) {
  const Json& dj = detail::field(j, "d");
  require(dj.is_number_integer() && dj.get<long>() >= 1, ErrorCode::InvalidArgument, "d must be a positive integer");
  const auto d = dj.get<Eigen::Index>();
  StateSpaceModel m;
  m.Q = detail::matrix_from(detail::field(j, "Q"), d, d, "Q");
  m.Sigma = detail::matrix_from(detail::field(j, "Sigma"), d, d, "Sigma");
  m.noise = noise_from_json(detail::field(j, "noise"));
  if (j.contains("provenance")) {
    const Json& p = j.at("provenance");
    const std::string kind = detail::field(p, "kind").get<std::string>();
    if (kind == "ar") {
      m.provenance = ArProvenance{detail::list_from(detail::field(p, "phi"), "phi"),
                                  p.contains("a") ? detail::list_from(p.at("a"), "a") : std::vector<double>{}};
    } else if (kind == "arma") {
      m.provenance = ArmaProvenance{detail::list_from(detail::field(p, "phi"), "phi"),
                                    detail::list_from(detail::field(p, "theta"), "theta")};
    } else {
      require(kind == "raw", ErrorCode::InvalidArgument, "unknown provenance kind '" + kind + "'");
    }
  }
  check_model_shapes(m);
  return m;
}

}  // namespace ergobound
