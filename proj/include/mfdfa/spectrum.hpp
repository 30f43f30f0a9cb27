#pragma once

// Mass exponents, the Legendre-transformed singularity spectrum and scalar
// measures of multifractality strength.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <vector>

#include "mfdfa/engine.hpp"
#include "mfdfa/error.hpp"

namespace mfdfa {

struct MassExponentCurve {
  std::vector<double> q;
  std::vector<double> tau;

  std::size_t size() const noexcept { return q.size(); }
  friend bool operator==(const MassExponentCurve&, const MassExponentCurve&) = default;
};

inline MassExponentCurve mass_exponents(const HurstSpectrum& h) {
  MassExponentCurve out;
  out.q = h.q;
  out.tau.resize(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out.tau[i] = h.q[i] * h.h[i] - 1.0;
  return out;
}

/// Indices i (interior) where the second difference of tau exceeds the noise
/// allowance 1e-6 + 2 * (propagated slope error of the three points used).
inline std::vector<std::size_t> concavity_violations(const MassExponentCurve& tau,
                                                     const HurstSpectrum& h) {
  std::vector<std::size_t> bad;
  for (std::size_t i = 1; i + 1 < tau.size(); ++i) {
    const double d2 = tau.tau[i + 1] - 2.0 * tau.tau[i] + tau.tau[i - 1];
    const double noise = std::abs(tau.q[i - 1]) * h.stdError[i - 1] +
                         2.0 * std::abs(tau.q[i]) * h.stdError[i] +
                         std::abs(tau.q[i + 1]) * h.stdError[i + 1];
    if (d2 > 1e-6 + 2.0 * noise) bad.push_back(i);
  }
  return bad;
}

struct SingularitySpectrum {
  std::vector<double> q;
  std::vector<double> alpha;
  std::vector<double> fAlpha;
  double alphaMin = 0.0;
  double alphaMax = 0.0;

  double width() const noexcept { return alphaMax - alphaMin; }
  double apex() const { return *std::max_element(fAlpha.begin(), fAlpha.end()); }
  std::size_t size() const noexcept { return q.size(); }
  friend bool operator==(const SingularitySpectrum&, const SingularitySpectrum&) = default;
};

/// alpha = d tau / dq by finite differences on the (possibly non-uniform) q
/// grid: three-point central differences inside, one-sided two-point
/// differences at the ends. f(alpha) = q alpha - tau.
inline SingularitySpectrum legendre_spectrum(const MassExponentCurve& tau) {
  const std::size_t n = tau.size();
  if (n < 3) throw Error(ErrorCode::InvalidParams, "Legendre transform needs 3 grid points");
  const auto& q = tau.q;
  const auto& t = tau.tau;

  SingularitySpectrum s;
  s.q = q;
  s.alpha.resize(n);
  s.fAlpha.resize(n);
  s.alpha[0] = (t[1] - t[0]) / (q[1] - q[0]);
  s.alpha[n - 1] = (t[n - 1] - t[n - 2]) / (q[n - 1] - q[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = q[i] - q[i - 1];
    const double hr = q[i + 1] - q[i];
    // Exact for quadratics; reduces to (t[i+1]-t[i-1])/(2h) on a uniform grid.
    s.alpha[i] = (hl * hl * (t[i + 1] - t[i]) + hr * hr * (t[i] - t[i - 1])) /
                 (hl * hr * (hl + hr));
  }
  for (std::size_t i = 0; i < n; ++i) s.fAlpha[i] = q[i] * s.alpha[i] - t[i];
  const auto [lo, hi] = std::minmax_element(s.alpha.begin(), s.alpha.end());
  s.alphaMin = *lo;
  s.alphaMax = *hi;
  return s;
}

/// True when f, ordered by increasing alpha and smoothed by a 3-point
/// running median, changes the sign of its first difference at most once
/// and only from rising to falling.
inline bool is_single_humped(const SingularitySpectrum& s) {
  const std::size_t n = s.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return s.alpha[a] < s.alpha[b]; });
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = s.fAlpha[order[i]];
  std::vector<double> smooth = f;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    double w[3] = {f[i - 1], f[i], f[i + 1]};
    std::sort(w, w + 3);
    smooth[i] = w[1];
  }
  int changes = 0;
  int lastSign = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = smooth[i + 1] - smooth[i];
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (lastSign != 0 && sign != lastSign) {
      if (lastSign < 0) return false;
      ++changes;
    }
    lastSign = sign;
  }
  return changes <= 1;
}

struct MultifractalityMeasure {
  double deltaAlpha = 0.0;
  /// h(q_min) - h(q_max)
  double deltaH = 0.0;
  /// max h - min h over the whole grid
  double hRange = 0.0;
  double qMin = 0.0;
  double qMax = 0.0;
  /// Set when deltaAlpha or deltaH came out negative.
  bool negativeByNoise = false;
  friend bool operator==(const MultifractalityMeasure&, const MultifractalityMeasure&) = default;
};

inline MultifractalityMeasure multifractality_width(const SingularitySpectrum& spec,
                                                    const HurstSpectrum& h) {
  if (spec.size() == 0 || h.size() == 0) {
    throw Error(ErrorCode::InvalidParams, "empty spectrum");
  }
  MultifractalityMeasure m;
  m.deltaAlpha = spec.width();
  m.qMin = h.q.front();
  m.qMax = h.q.back();
  m.deltaH = h.h.front() - h.h.back();
  const auto [lo, hi] = std::minmax_element(h.h.begin(), h.h.end());
  m.hRange = *hi - *lo;
  m.negativeByNoise = m.deltaAlpha < 0.0 || m.deltaH < 0.0;
  return m;
}

/// Everything computed for one series from h(q) onwards.
struct SpectrumReport {
  HurstSpectrum hurst;
  MassExponentCurve mass;
  SingularitySpectrum singularity;
  MultifractalityMeasure measure;
  friend bool operator==(const SpectrumReport&, const SpectrumReport&) = default;
};

inline SpectrumReport spectrum_report(HurstSpectrum h, MassExponentCurve tau,
                                      SingularitySpectrum spec, MultifractalityMeasure measure) {
  return SpectrumReport{std::move(h), std::move(tau), std::move(spec), measure};
}

}  // namespace mfdfa
