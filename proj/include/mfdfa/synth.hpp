#pragma once

// Synthetic series with known scaling, used as ground truth for the estimator.

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mfdfa/error.hpp"
#include "mfdfa/series.hpp"

namespace mfdfa::synth {

inline constexpr std::size_t kMinNoiseLength = 64;

/// iid standard Gaussian draws.
inline ReturnSeries white_noise(std::size_t length, std::uint64_t seed) {
  if (length < kMinNoiseLength) {
    throw Error(ErrorCode::InvalidParams, "white noise length must be >= 64");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> out(length);
  for (double& v : out) v = dist(rng);
  return ReturnSeries(std::move(out));
}

/// iid Student-t draws: heavy tails without temporal correlation.
inline ReturnSeries student_t_noise(std::size_t length, double dof, std::uint64_t seed) {
  if (length < kMinNoiseLength) {
    throw Error(ErrorCode::InvalidParams, "Student-t length must be >= 64");
  }
  if (!(dof > 0.0)) throw Error(ErrorCode::InvalidParams, "degrees of freedom must be positive");
  std::mt19937_64 rng(seed);
  std::student_t_distribution<double> dist(dof);
  std::vector<double> out(length);
  for (double& v : out) v = dist(rng);
  return ReturnSeries(std::move(out));
}

struct CascadeParams {
  int levels = 13;
  double weight = 0.6;

  void validate() const {
    if (levels < 1 || levels > 24) {
      throw Error(ErrorCode::InvalidParams, "cascade levels must lie in [1, 24]");
    }
    if (!(weight > 0.5 && weight < 1.0)) {
      throw Error(ErrorCode::InvalidParams, "cascade weight must lie in (0.5, 1)");
    }
  }
};

/// Deterministic binomial multifractal: x_i = w^n(i) (1-w)^(k-n(i)) for
/// i = 0..2^k-1, with n(i) the number of set bits of i.
inline ReturnSeries binomial_cascade(const CascadeParams& p) {
  p.validate();
  const std::uint32_t n = 1u << p.levels;
  std::vector<double> powHeavy(p.levels + 1), powLight(p.levels + 1);
  for (int j = 0; j <= p.levels; ++j) {
    powHeavy[j] = std::pow(p.weight, j);
    powLight[j] = std::pow(1.0 - p.weight, j);
  }
  std::vector<double> out(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const int ones = std::popcount(i);
    out[i] = powHeavy[ones] * powLight[p.levels - ones];
  }
  return ReturnSeries(std::move(out));
}

/// Closed-form h(q) of the binomial cascade:
/// 1/q - ln(w^q + (1-w)^q) / (q ln 2), and -log2(w (1-w)) / 2 at q = 0.
inline double analytic_cascade_hurst(const CascadeParams& p, double q) {
  p.validate();
  const double a = p.weight;
  const double b = 1.0 - a;
  if (q == 0.0) return -std::log2(a * b) / 2.0;
  return 1.0 / q - std::log(std::pow(a, q) + std::pow(b, q)) / (q * std::numbers::ln2);
}

}  // namespace mfdfa::synth
