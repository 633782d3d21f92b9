// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ergobound {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonFinite,
  NonConvergence,
  NotSchurStable,
  KappaBelowThreshold,
  NotSymmetric,
  NotPSD,
  EmptyCoefficients,
  OrderViolation,
  NotGaussian,
  SingularStationaryCovariance,
  MomentUnavailable,
  NotDiagonalizable,
  OutOfRegime,
  ZeroEigenvalue,
  UnequalSampleSizes,
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NotSchurStable: return "NotSchurStable";
    case ErrorCode::KappaBelowThreshold: return "KappaBelowThreshold";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::EmptyCoefficients: return "EmptyCoefficients";
    case ErrorCode::OrderViolation: return "OrderViolation";
    case ErrorCode::NotGaussian: return "NotGaussian";
    case ErrorCode::SingularStationaryCovariance: return "SingularStationaryCovariance";
    case ErrorCode::MomentUnavailable: return "MomentUnavailable";
    case ErrorCode::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorCode::OutOfRegime: return "OutOfRegime";
    case ErrorCode::ZeroEigenvalue: return "ZeroEigenvalue";
    case ErrorCode::UnequalSampleSizes: return "UnequalSampleSizes";
  }
  return "Unknown";
}

/// Library exception; `code()` identifies the violated contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace ergobound
