#pragma once

// Single-series pipeline: returns -> profile -> F_q(a) -> h(q) -> tau(q) -> f(alpha).

#include <cstddef>

#include "mfdfa/engine.hpp"
#include "mfdfa/series.hpp"
#include "mfdfa/spectrum.hpp"

namespace mfdfa {

struct MfdfaParams {
  ScaleGrid scales;
  QGrid q;
  int order = 1;
  FitRange fit;

  static constexpr std::size_t kDefaultScaleMin = 16;
  static constexpr std::size_t kDefaultScaleMax = 1024;
  static constexpr std::size_t kDefaultScaleCount = 19;
  static constexpr double kDefaultQMin = -5.0;
  static constexpr double kDefaultQMax = 5.0;
  static constexpr double kDefaultQStep = 0.25;

  /// 19 log-spaced scales in [16, 1024], q in [-5, 5] step 0.25, MFDFA1.
  static MfdfaParams defaults(std::size_t length) {
    MfdfaParams p;
    p.scales = make_scale_grid(length, kDefaultScaleMin, kDefaultScaleMax, kDefaultScaleCount,
                               p.order);
    p.q = make_q_grid(kDefaultQMin, kDefaultQMax, kDefaultQStep);
    return p;
  }
};

struct SeriesAnalysis {
  FluctuationSurface surface;
  SpectrumReport spectrum;

  double width() const noexcept { return spectrum.measure.deltaAlpha; }
};

inline SeriesAnalysis analyze(const ReturnSeries& returns, const MfdfaParams& params,
                              bool keepVariances = false) {
  const Profile profile = build_profile(returns);
  FluctuationSurface surface =
      fluctuation_surface(profile, params.scales, params.q, params.order, keepVariances);
  HurstSpectrum h = fit_hurst_spectrum(surface, params.fit);
  MassExponentCurve tau = mass_exponents(h);
  SingularitySpectrum spec = legendre_spectrum(tau);
  const MultifractalityMeasure measure = multifractality_width(spec, h);
  return SeriesAnalysis{std::move(surface),
                        spectrum_report(std::move(h), std::move(tau), std::move(spec), measure)};
}

}  // namespace mfdfa
