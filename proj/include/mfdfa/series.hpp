#pragma once

// Price series, log returns and the cumulative profile that MFDFA detrends.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mfdfa/error.hpp"

namespace mfdfa {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

inline double compensated_mean(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return xs.empty() ? 0.0 : acc.value() / static_cast<double>(xs.size());
}

/// Strictly positive prices ordered by date. Labels are optional date tags.
struct PriceSeries {
  std::vector<double> values;
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return values.size(); }

  void validate() const {
    if (values.size() < 3) {
      throw Error(ErrorCode::TooShort,
                  "need at least 3 prices, got " + std::to_string(values.size()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
        std::string where = labels.size() == values.size() ? labels[i] : "#" + std::to_string(i);
        throw Error(ErrorCode::NonPositivePrice, "price at " + where + " is not a positive number");
      }
    }
    if (!labels.empty() && labels.size() != values.size()) {
      throw Error(ErrorCode::InvalidParams, "label count does not match price count");
    }
  }
};

/// Log-return sequence with its cached mean.
class ReturnSeries {
 public:
  ReturnSeries() = default;

  explicit ReturnSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorCode::EmptySeries, "return series is empty");
    for (double v : values_) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidParams, "return series has a non-finite value");
    }
    mean_ = compensated_mean(values_);
  }

  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }
  double mean() const noexcept { return mean_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  friend bool operator==(const ReturnSeries&, const ReturnSeries&) = default;

 private:
  std::vector<double> values_;
  double mean_ = 0.0;
};

/// Cumulative sum of mean-centred returns, Y(1..M).
class Profile {
 public:
  Profile() = default;
  explicit Profile(std::vector<double> values) : values_(std::move(values)) {}

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

 private:
  std::vector<double> values_;
};

inline ReturnSeries compute_log_returns(const PriceSeries& prices) {
  prices.validate();
  std::vector<double> out(prices.size() - 1);
  for (std::size_t k = 0; k + 1 < prices.size(); ++k) {
    out[k] = std::log(prices.values[k + 1]) - std::log(prices.values[k]);
  }
  return ReturnSeries(std::move(out));
}

inline Profile build_profile(const ReturnSeries& returns) {
  const double mean = returns.mean();
  std::vector<double> y(returns.size());
  CompensatedSum acc;
  for (std::size_t i = 0; i < returns.size(); ++i) {
    acc.add(returns[i] - mean);
    y[i] = acc.value();
  }
  return Profile(std::move(y));
}

struct ValidationSummary {
  std::size_t length = 0;
  std::size_t zeroCount = 0;
  double zeroFraction = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  bool zeroWarning = false;

  static constexpr double kZeroFractionLimit = 0.10;
  friend bool operator==(const ValidationSummary&, const ValidationSummary&) = default;
};

inline ValidationSummary validate_series(const ReturnSeries& returns) {
  ValidationSummary s;
  s.length = returns.size();
  if (s.length == 0) return s;
  s.zeroCount = static_cast<std::size_t>(
      std::count(returns.values().begin(), returns.values().end(), 0.0));
  s.zeroFraction = static_cast<double>(s.zeroCount) / static_cast<double>(s.length);
  s.mean = returns.mean();
  CompensatedSum sq;
  for (double x : returns.values()) sq.add((x - s.mean) * (x - s.mean));
  s.variance = sq.value() / static_cast<double>(s.length);
  s.zeroWarning = s.zeroFraction >= ValidationSummary::kZeroFractionLimit;
  return s;
}

}  // namespace mfdfa
