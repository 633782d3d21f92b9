// Copyright 2026 The ergobound Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace ergobound {

/// Philox4x32-10 block function (Salmon et al., SC'11).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += W0;
    key[1] += W1;
  }
  return ctr;
}

enum class StreamDomain : std::uint32_t { path_noise = 0, stationary = 1, directions = 2, moments = 3, test = 4 };

/// Counter-based substream identified by (seed, domain, path, time).
///
/// Counter words: (block index, time, path low 32 bits, path high 24 bits | domain << 24).
/// Every draw is a pure function of these coordinates, so results do not depend
/// on which thread produced them.
class CounterStream {
 public:
  using result_type = std::uint32_t;

  CounterStream(std::uint64_t seed, StreamDomain domain, std::uint64_t path, std::uint64_t time)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        time_(static_cast<std::uint32_t>(time)),
        path_lo_(static_cast<std::uint32_t>(path)),
        path_hi_tag_((static_cast<std::uint32_t>(path >> 32) & 0x00FFFFFFu) |
                     (static_cast<std::uint32_t>(domain) << 24)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = (*this)();
    return (hi << 32) | (*this)();
  }

  /// Uniform on the open interval (0, 1) with 53-bit resolution.
  double uniform01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01(), u2 = uniform01();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    has_spare_ = true;
    return rad * std::cos(ang);
  }

  double laplace(double loc, double b) {
    const double u = uniform01() - 0.5;
    return loc - b * std::copysign(std::log1p(-2.0 * std::abs(u)), u);
  }

  double uniform(double loc, double half_width) { return loc + half_width * (2.0 * uniform01() - 1.0); }

  double student_t(double nu, double scale) {
    const double z = normal();
    std::gamma_distribution<double> gamma(0.5 * nu, 2.0);
    const double chi2 = gamma(*this);
    return scale * z / std::sqrt(chi2 / nu);
  }

 private:
  void refill() {
    buf_ = philox4x32({block_++, time_, path_lo_, path_hi_tag_}, key_);
    pos_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t time_, path_lo_, path_hi_tag_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ergobound
