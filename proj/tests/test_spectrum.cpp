#include <gtest/gtest.h>

#include <cmath>

#include "mfdfa/analysis.hpp"
#include "mfdfa/spectrum.hpp"
#include "mfdfa/synth.hpp"
#include "oracles.hpp"

using namespace mfdfa;

namespace {

HurstSpectrum constant_h(const QGrid& q, double value) {
  HurstSpectrum h;
  h.q = q.values;
  h.h.assign(q.size(), value);
  h.stdError.assign(q.size(), 0.0);
  h.rSquared.assign(q.size(), 1.0);
  return h;
}

MassExponentCurve tau_from(const QGrid& q, auto&& fn) {
  MassExponentCurve t;
  t.q = q.values;
  for (double x : q.values) t.tau.push_back(fn(x));
  return t;
}

}  // namespace

TEST(MassExponents, MonofractalIsLinear) {
  const QGrid q = make_q_grid(-5, 5, 0.25);
  const MassExponentCurve t = mass_exponents(constant_h(q, 0.5));
  for (std::size_t i = 0; i < q.size(); ++i) EXPECT_EQ(t.tau[i], 0.5 * q.values[i] - 1.0);
}

TEST(MassExponents, TauAtZeroIsMinusOne) {
  const ReturnSeries c = synth::binomial_cascade({12, 0.7});
  const SeriesAnalysis a = analyze(c, MfdfaParams::defaults(c.size()));
  const auto& t = a.spectrum.mass;
  const std::size_t i0 = 20;
  ASSERT_EQ(t.q[i0], 0.0);
  EXPECT_EQ(t.tau[i0], -1.0);
}

TEST(MassExponents, PointwiseUnderGridRefinement) {
  const ReturnSeries c = synth::binomial_cascade({12, 0.65});
  MfdfaParams coarse = MfdfaParams::defaults(c.size());
  coarse.q = make_q_grid(-4, 4, 1.0);
  MfdfaParams fine = coarse;
  fine.q = make_q_grid(-4, 4, 0.5);
  const auto a = analyze(c, coarse).spectrum.mass;
  const auto b = analyze(c, fine).spectrum.mass;
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.tau[i], b.tau[2 * i]);
}

TEST(MassExponents, CascadeIsConcave) {
  const ReturnSeries c = synth::binomial_cascade({13, 0.6});
  const SeriesAnalysis a = analyze(c, MfdfaParams::defaults(c.size()));
  EXPECT_TRUE(concavity_violations(a.spectrum.mass, a.spectrum.hurst).empty());
  // and genuinely nonlinear
  const auto& t = a.spectrum.mass.tau;
  EXPECT_LT(t.front() + t.back() - 2.0 * t[20], -0.5);
}

TEST(Legendre, LinearTauIsDelta) {
  const QGrid q = make_q_grid(-5, 5, 0.25);
  const SingularitySpectrum s = legendre_spectrum(tau_from(q, [](double x) { return 0.62 * x - 1.0; }));
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(s.alpha[i], 0.62, 1e-12);
    EXPECT_NEAR(s.fAlpha[i], 1.0, 1e-12);
  }
  EXPECT_NEAR(s.width(), 0.0, 1e-12);
}

TEST(Legendre, QuadraticTauIsExactInside) {
  const double a = -0.03, b = 0.8, c = -1.0;
  for (const QGrid& q : {make_q_grid(-5, 5, 0.25), QGrid{{-5, -3.5, -1, 0, 0.4, 2, 4.75}}}) {
    const SingularitySpectrum s = legendre_spectrum(tau_from(q, [&](double x) { return a * x * x + b * x + c; }));
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
      const double x = q.values[i];
      EXPECT_NEAR(s.alpha[i], 2 * a * x + b, 1e-12);
      EXPECT_NEAR(s.fAlpha[i], a * x * x - c, 1e-12);
    }
  }
}

TEST(Legendre, BinomialCascadeAnalyticProbes) {
  const double w = 0.6;
  const QGrid q = make_q_grid(-5, 5, 0.05);
  const SingularitySpectrum s =
      legendre_spectrum(tau_from(q, [&](double x) { return -std::log2(std::pow(w, x) + std::pow(1 - w, x)); }));
  for (double probe : {-3.0, 0.5, 4.0}) {
    const std::size_t i = nearest_index(q.values, probe);
    const auto [alpha, f] = oracle::cascade_alpha_f(w, q.values[i]);
    EXPECT_NEAR(s.alpha[i], alpha, 1e-3) << probe;
    EXPECT_NEAR(s.fAlpha[i], f, 1e-3) << probe;
  }
}

TEST(Legendre, EstimatedCascadeSpectrumShape) {
  const ReturnSeries c = synth::binomial_cascade({13, 0.6});
  const SeriesAnalysis a = analyze(c, MfdfaParams::defaults(c.size()));
  const auto& s = a.spectrum.singularity;
  EXPECT_TRUE(is_single_humped(s));
  EXPECT_NEAR(s.apex(), 1.0, 0.05);
  for (double f : s.fAlpha) EXPECT_LE(f, s.apex());
  EXPECT_GT(s.width(), 0.3);
}

TEST(Legendre, WhiteNoiseApexMostlyNearOne) {
  const auto p = MfdfaParams::defaults(4726);
  int near = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = analyze(synth::white_noise(4726, seed), p).spectrum.singularity;
    near += std::abs(s.apex() - 1.0) <= 0.05;
    EXPECT_GE(s.width(), 0.0);
  }
  EXPECT_GE(near, 18);
}

// A monofractal spectrum is a near-delta whose shape is noise, so the hump
// check is made on multifractal inputs only.
TEST(Legendre, MultifractalSpectraAreSingleHumped) {
  for (double w : {0.55, 0.6, 0.7, 0.8}) {
    const ReturnSeries c = synth::binomial_cascade({13, w});
    EXPECT_TRUE(is_single_humped(analyze(c, MfdfaParams::defaults(c.size())).spectrum.singularity)) << w;
  }
  const auto p = MfdfaParams::defaults(4726);
  int humped = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = analyze(synth::student_t_noise(4726, 3.0, seed), p).spectrum.singularity;
    humped += is_single_humped(s);
    EXPECT_LE(s.apex(), 1.05);
  }
  EXPECT_GE(humped, 18);
}

TEST(Legendre, NeedsThreePoints) {
  EXPECT_THROW(legendre_spectrum(MassExponentCurve{{0, 1}, {-1, 0}}), Error);
}

TEST(SingleHump, DetectsValley) {
  SingularitySpectrum s;
  s.q = {0, 1, 2, 3, 4, 5, 6};
  s.alpha = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  s.fAlpha = {0.9, 0.5, 0.2, 0.2, 0.5, 0.9, 0.95};
  EXPECT_FALSE(is_single_humped(s));
  s.fAlpha = {0.2, 0.6, 0.9, 1.0, 0.9, 0.6, 0.2};
  EXPECT_TRUE(is_single_humped(s));
}

TEST(Width, WhiteNoiseBounds) {
  const auto p = MfdfaParams::defaults(4726);
  double da = 0.0, dh = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto m = analyze(synth::white_noise(4726, 500 + seed), p).spectrum.measure;
    da += m.deltaAlpha / 20.0;
    dh += m.deltaH / 20.0;
  }
  EXPECT_LT(dh, 0.05);
  EXPECT_LT(std::abs(da), 0.15);
}

TEST(Width, DeltaHConventions) {
  HurstSpectrum h = constant_h(make_q_grid(-2, 2, 1), 0.0);
  h.h = {0.9, 0.8, 0.7, 0.6, 0.5};
  const auto s = legendre_spectrum(mass_exponents(h));
  auto m = multifractality_width(s, h);
  EXPECT_DOUBLE_EQ(m.deltaH, 0.4);
  EXPECT_DOUBLE_EQ(m.hRange, 0.4);
  EXPECT_FALSE(m.negativeByNoise);
  EXPECT_EQ(m.qMin, -2.0);
  EXPECT_EQ(m.qMax, 2.0);

  h.h = {0.7, 0.9, 0.6, 0.5, 0.65};  // non-monotone
  m = multifractality_width(legendre_spectrum(mass_exponents(h)), h);
  EXPECT_NEAR(m.deltaH, 0.05, 1e-15);
  EXPECT_DOUBLE_EQ(m.hRange, 0.4);
  EXPECT_LE(m.deltaH, m.hRange);

  h.h = {0.5, 0.55, 0.6, 0.65, 0.7};
  m = multifractality_width(legendre_spectrum(mass_exponents(h)), h);
  EXPECT_TRUE(m.negativeByNoise);
}

TEST(Report, BundlesAllSections) {
  const ReturnSeries c = synth::binomial_cascade({11, 0.6});
  auto p = MfdfaParams::defaults(c.size());
  p.scales = make_scale_grid(c.size(), 16, 512, 10);
  const SeriesAnalysis a = analyze(c, p);
  const SpectrumReport r = spectrum_report(a.spectrum.hurst, a.spectrum.mass, a.spectrum.singularity,
                                           a.spectrum.measure);
  EXPECT_EQ(r, a.spectrum);
  EXPECT_EQ(r.hurst.q, p.q.values);
  EXPECT_EQ(r.measure.deltaAlpha, r.singularity.width());
}
