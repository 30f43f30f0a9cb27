#pragma once

// Multifractal detrended fluctuation analysis: segmentation from both ends,
// polynomial detrending, q-order fluctuation functions and the log-log
// regression that yields the generalized Hurst exponents h(q).

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mfdfa/error.hpp"
#include "mfdfa/series.hpp"

namespace mfdfa {

inline constexpr int kMaxDetrendOrder = 7;
inline constexpr double kVarianceFloor = 1e-30;

// ---------------------------------------------------------------------------
// Grids

struct ScaleGrid {
  std::vector<std::size_t> scales;

  std::size_t size() const noexcept { return scales.size(); }
  friend bool operator==(const ScaleGrid&, const ScaleGrid&) = default;
};

struct QGrid {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  bool contains_zero() const noexcept {
    return std::find(values.begin(), values.end(), 0.0) != values.end();
  }
  friend bool operator==(const QGrid&, const QGrid&) = default;
};

/// `count` integer scales spaced evenly in log(scale) between the endpoints,
/// rounded and deduplicated. Both endpoints are always present.
inline ScaleGrid make_scale_grid(std::size_t length, std::size_t minScale, std::size_t maxScale,
                                 std::size_t count, int order = 1) {
  if (order < 0 || order > kMaxDetrendOrder) {
    throw Error(ErrorCode::InvalidRange, "detrend order out of range");
  }
  if (minScale < static_cast<std::size_t>(order) + 2) {
    throw Error(ErrorCode::InvalidRange, "minimum scale " + std::to_string(minScale) +
                                             " must be at least order + 2");
  }
  if (maxScale <= minScale) {
    throw Error(ErrorCode::InvalidRange, "maximum scale must exceed minimum scale");
  }
  if (2 * maxScale > length) {
    throw Error(ErrorCode::InvalidRange, "maximum scale " + std::to_string(maxScale) +
                                             " exceeds half the series length " +
                                             std::to_string(length));
  }
  if (count < 4) throw Error(ErrorCode::InvalidRange, "need at least 4 scales");

  const double lo = std::log(static_cast<double>(minScale));
  const double hi = std::log(static_cast<double>(maxScale));
  ScaleGrid grid;
  grid.scales.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    double s = std::exp(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1));
    auto rounded = static_cast<std::size_t>(std::llround(s));
    rounded = std::clamp(rounded, minScale, maxScale);
    if (grid.scales.empty() || rounded > grid.scales.back()) grid.scales.push_back(rounded);
  }
  grid.scales.back() = maxScale;
  return grid;
}

/// Moment orders min, min+step, ..., max. Values within 1e-9 step of zero
/// are snapped to exactly 0 so the logarithmic branch is used there.
inline QGrid make_q_grid(double qMin, double qMax, double step) {
  if (!(step > 0.0) || !(qMax > qMin) || !std::isfinite(qMin) || !std::isfinite(qMax)) {
    throw Error(ErrorCode::InvalidRange, "q grid needs qMin < qMax and a positive step");
  }
  const auto n = static_cast<std::size_t>(std::floor((qMax - qMin) / step + 1e-9)) + 1;
  if (n < 3) throw Error(ErrorCode::InvalidRange, "q grid needs at least 3 points");
  QGrid grid;
  grid.values.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double q = qMin + step * static_cast<double>(k);
    if (std::abs(q) < step * 1e-9) q = 0.0;
    grid.values.push_back(q);
  }
  return grid;
}

/// Index of the grid value nearest to `target`.
inline std::size_t nearest_index(const std::vector<double>& grid, double target) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] - target) < std::abs(grid[best] - target)) best = i;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Segmentation

/// Segment placement at one scale.
///
/// Positions refer to the profile extended with its origin, Y(0) = 0, so a
/// series of M returns has profile positions 0..M. Forward segments start
/// at the origin, backward segments end at Y(M). Reversing the return series
/// maps each forward segment onto the matching backward segment.
struct SegmentLayout {
  std::size_t length = 0;      // M
  std::size_t scale = 0;       // a
  std::size_t numForward = 0;  // M_a = floor(M / a)

  std::size_t total_segments() const noexcept { return 2 * numForward; }

  /// First profile position of segment `mu`, 0-based over all 2 M_a segments:
  /// [0, M_a) forward, [M_a, 2 M_a) backward from the series end.
  std::size_t start(std::size_t mu) const noexcept {
    if (mu < numForward) return mu * scale;
    const std::size_t j = mu - numForward;
    return length - (j + 1) * scale + 1;
  }
  std::size_t last(std::size_t mu) const noexcept { return start(mu) + scale - 1; }
};

inline SegmentLayout segment_bounds(std::size_t length, std::size_t scale) {
  if (scale < 1 || scale > length) {
    throw Error(ErrorCode::InvalidRange, "scale must lie in [1, M]");
  }
  return SegmentLayout{length, scale, length / scale};
}

// ---------------------------------------------------------------------------
// Detrending

/// Removes the least-squares polynomial of a fixed degree from segments of a
/// fixed length. The fit uses an orthonormal basis of discrete polynomials on
/// the centred, rescaled abscissa, built once per (length, order).
class PolynomialDetrender {
 public:
  PolynomialDetrender(std::size_t length, int order)
      : length_(length), order_(order), basis_((order + 1) * length) {
    assert(order >= 0 && order <= kMaxDetrendOrder);
    assert(length >= static_cast<std::size_t>(order) + 2);
    const double half = 0.5 * static_cast<double>(length - 1);
    for (int k = 0; k <= order_; ++k) {
      double* col = column(k);
      for (std::size_t i = 0; i < length_; ++i) {
        const double t = (static_cast<double>(i) - half) / half;
        col[i] = std::pow(t, k);
      }
      // Modified Gram-Schmidt, applied twice for orthogonality to rounding.
      for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < k; ++j) {
          const double* prev = column(j);
          double proj = 0.0;
          for (std::size_t i = 0; i < length_; ++i) proj += prev[i] * col[i];
          for (std::size_t i = 0; i < length_; ++i) col[i] -= proj * prev[i];
        }
      }
      double norm = 0.0;
      for (std::size_t i = 0; i < length_; ++i) norm += col[i] * col[i];
      norm = std::sqrt(norm);
      assert(norm > 0.0 && "rank-deficient polynomial fit");
      for (std::size_t i = 0; i < length_; ++i) col[i] /= norm;
    }
  }

  std::size_t length() const noexcept { return length_; }
  int order() const noexcept { return order_; }

  /// Mean squared residual of `segment` about its best-fit polynomial.
  double variance(std::span<const double> segment) const {
    assert(segment.size() == length_);
    std::array<double, kMaxDetrendOrder + 1> coef{};
    for (int k = 0; k <= order_; ++k) {
      const double* col = column(k);
      double c = 0.0;
      for (std::size_t i = 0; i < length_; ++i) c += col[i] * segment[i];
      coef[k] = c;
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < length_; ++i) {
      double fit = 0.0;
      for (int k = 0; k <= order_; ++k) fit += coef[k] * basis_[k * length_ + i];
      const double r = segment[i] - fit;
      ss += r * r;
    }
    return ss / static_cast<double>(length_);
  }

 private:
  double* column(int k) noexcept { return basis_.data() + static_cast<std::size_t>(k) * length_; }
  const double* column(int k) const noexcept {
    return basis_.data() + static_cast<std::size_t>(k) * length_;
  }

  std::size_t length_;
  int order_;
  std::vector<double> basis_;
};

inline double detrended_variance(std::span<const double> segment, int order) {
  return PolynomialDetrender(segment.size(), order).variance(segment);
}

// ---------------------------------------------------------------------------
// Fluctuation function

/// q-order fluctuation function over the segment variances of one scale.
///
/// Variances below kVarianceFloor are floored first; the number floored is
/// added to `floored` when given. Evaluated in the log domain so that large
/// |q| cannot overflow.
inline double fluctuation_function(std::span<const double> variances, double q,
                                   std::size_t* floored = nullptr) {
  if (variances.empty() ||
      std::all_of(variances.begin(), variances.end(), [](double v) { return !(v > 0.0); })) {
    throw Error(ErrorCode::DegenerateSeries, "all segment variances are zero");
  }
  const auto n = static_cast<double>(variances.size());
  std::size_t nFloored = 0;
  auto logVar = [&](double v) {
    if (v < kVarianceFloor) {
      ++nFloored;
      v = kVarianceFloor;
    }
    return std::log(v);
  };

  double result;
  if (q == 0.0) {
    // exp{ 1/(4 M_a) sum ln F^2 } with 2 M_a = n
    double s = 0.0;
    for (double v : variances) s += logVar(v);
    result = std::exp(s / (2.0 * n));
  } else {
    const double half = 0.5 * q;
    double peak = -std::numeric_limits<double>::infinity();
    std::vector<double> terms;
    terms.reserve(variances.size());
    for (double v : variances) {
      terms.push_back(half * logVar(v));
      peak = std::max(peak, terms.back());
    }
    double s = 0.0;
    for (double t : terms) s += std::exp(t - peak);
    result = std::exp((peak + std::log(s / n)) / q);
  }
  if (floored) *floored += nFloored;
  return result;
}

// ---------------------------------------------------------------------------
// Fluctuation surface

struct FluctuationSurface {
  QGrid q;
  ScaleGrid scales;
  int detrendOrder = 1;
  /// F_q(a), q-major: values[iq * scales.size() + ia].
  std::vector<double> values;
  /// Segment variances per scale, kept only on request.
  std::vector<std::vector<double>> segmentVariances;
  std::size_t flooredSegments = 0;
  /// False when F_q(a) decreased with q somewhere beyond rounding.
  bool monotoneInQ = true;

  double at(std::size_t iq, std::size_t ia) const { return values[iq * scales.size() + ia]; }
  friend bool operator==(const FluctuationSurface&, const FluctuationSurface&) = default;
};

/// All 2 floor(M/a) detrended segment variances at scale `scale`, forward
/// segments first.
inline std::vector<double> segment_variances(std::span<const double> anchoredProfile,
                                             std::size_t scale, int order) {
  const std::size_t length = anchoredProfile.size() - 1;
  const SegmentLayout layout = segment_bounds(length, scale);
  const PolynomialDetrender detrender(scale, order);
  std::vector<double> out(layout.total_segments());
  for (std::size_t mu = 0; mu < out.size(); ++mu) {
    out[mu] = detrender.variance(anchoredProfile.subspan(layout.start(mu), scale));
  }
  return out;
}

inline std::vector<double> anchored_profile(const Profile& profile) {
  std::vector<double> out;
  out.reserve(profile.size() + 1);
  out.push_back(0.0);
  out.insert(out.end(), profile.values().begin(), profile.values().end());
  return out;
}

inline FluctuationSurface fluctuation_surface(const Profile& profile, const ScaleGrid& scales,
                                              const QGrid& qs, int order,
                                              bool keepVariances = false) {
  if (order < 0 || order > kMaxDetrendOrder) {
    throw Error(ErrorCode::InvalidParams, "detrend order out of range");
  }
  if (scales.size() == 0 || qs.size() == 0) {
    throw Error(ErrorCode::InvalidParams, "empty scale or q grid");
  }
  if (!std::is_sorted(qs.values.begin(), qs.values.end())) {
    throw Error(ErrorCode::InvalidParams, "q grid must be increasing");
  }
  const std::vector<double> anchored = anchored_profile(profile);

  FluctuationSurface surface;
  surface.q = qs;
  surface.scales = scales;
  surface.detrendOrder = order;
  surface.values.assign(qs.size() * scales.size(), 0.0);

  for (std::size_t ia = 0; ia < scales.size(); ++ia) {
    const std::size_t a = scales.scales[ia];
    if (a < static_cast<std::size_t>(order) + 2 || 2 * a > profile.size()) {
      throw Error(ErrorCode::InvalidRange,
                  "scale " + std::to_string(a) + " unusable for series of length " +
                      std::to_string(profile.size()));
    }
    std::vector<double> vars = segment_variances(anchored, a, order);
    std::size_t floored = 0;
    for (std::size_t iq = 0; iq < qs.size(); ++iq) {
      std::size_t* counter = iq == 0 ? &floored : nullptr;
      surface.values[iq * scales.size() + ia] = fluctuation_function(vars, qs.values[iq], counter);
    }
    surface.flooredSegments += floored;
    for (std::size_t iq = 1; iq < qs.size(); ++iq) {
      const double lo = surface.at(iq - 1, ia);
      const double hi = surface.at(iq, ia);
      if (hi < lo * (1.0 - 1e-12)) surface.monotoneInQ = false;
    }
    if (keepVariances) surface.segmentVariances.push_back(std::move(vars));
  }
  return surface;
}

// ---------------------------------------------------------------------------
// Scaling regression

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slopeStdError = 0.0;
  double rSquared = 1.0;
  friend bool operator==(const LineFit&, const LineFit&) = default;
};

/// Ordinary least squares y = intercept + slope x.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size() && x.size() >= 2);
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    ssr += r * r;
  }
  fit.slopeStdError = x.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
  fit.rSquared = syy > 0.0 ? std::max(0.0, 1.0 - ssr / syy) : 1.0;
  return fit;
}

struct HurstSpectrum {
  std::vector<double> q;
  std::vector<double> h;
  std::vector<double> stdError;
  std::vector<double> rSquared;
  std::size_t fitScaleMin = 0;
  std::size_t fitScaleMax = 0;

  std::size_t size() const noexcept { return q.size(); }
  friend bool operator==(const HurstSpectrum&, const HurstSpectrum&) = default;
};

/// Optional restriction of the regression to scales within [min, max].
struct FitRange {
  std::size_t minScale = 0;
  std::size_t maxScale = std::numeric_limits<std::size_t>::max();
};

inline HurstSpectrum fit_hurst_spectrum(const FluctuationSurface& surface, FitRange range = {}) {
  std::vector<std::size_t> used;
  for (std::size_t ia = 0; ia < surface.scales.size(); ++ia) {
    const std::size_t a = surface.scales.scales[ia];
    if (a >= range.minScale && a <= range.maxScale) used.push_back(ia);
  }
  if (used.size() < 4) {
    throw Error(ErrorCode::InvalidRange, "scaling fit needs at least 4 scales");
  }
  std::vector<double> x(used.size()), y(used.size());
  for (std::size_t k = 0; k < used.size(); ++k) {
    x[k] = std::log(static_cast<double>(surface.scales.scales[used[k]]));
  }

  HurstSpectrum out;
  out.q = surface.q.values;
  out.fitScaleMin = surface.scales.scales[used.front()];
  out.fitScaleMax = surface.scales.scales[used.back()];
  for (std::size_t iq = 0; iq < surface.q.size(); ++iq) {
    for (std::size_t k = 0; k < used.size(); ++k) y[k] = std::log(surface.at(iq, used[k]));
    const LineFit fit = fit_line(x, y);
    if (!std::isfinite(fit.slope)) {
      throw Error(ErrorCode::DegenerateSeries, "non-finite scaling exponent");
    }
    out.h.push_back(fit.slope);
    out.stdError.push_back(fit.slopeStdError);
    out.rSquared.push_back(fit.rSquared);
  }
  return out;
}

/// Pairs (i, i+1) where h increases by more than twice the larger standard
/// error of the two slopes.
inline std::vector<std::size_t> monotonicity_violations(const HurstSpectrum& h) {
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) {
    const double allowance = 2.0 * std::max(h.stdError[i], h.stdError[i + 1]);
    if (h.h[i + 1] - h.h[i] > allowance) bad.push_back(i);
  }
  return bad;
}

}  // namespace mfdfa
