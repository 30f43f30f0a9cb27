#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "mfdfa/analysis.hpp"
#include "mfdfa/synth.hpp"

using namespace mfdfa;

TEST(WhiteNoise, MomentsAndDeterminism) {
  const ReturnSeries a = synth::white_noise(16384, 1);
  EXPECT_LT(std::abs(a.mean()), 4.0 / std::sqrt(16384.0));
  const auto s = validate_series(a);
  EXPECT_NEAR(s.variance, 1.0, 0.05);
  EXPECT_EQ(a, synth::white_noise(16384, 1));
  EXPECT_NE(a.vector(), synth::white_noise(16384, 2).vector());
}

TEST(WhiteNoise, RejectsShortLength) {
  EXPECT_THROW(synth::white_noise(63, 1), Error);
  EXPECT_NO_THROW(synth::white_noise(64, 1));
}

TEST(StudentT, HeavyTails) {
  const ReturnSeries r = synth::student_t_noise(1 << 14, 3.0, 4);
  double m2 = 0, m4 = 0;
  for (double v : r.values()) {
    const double d = v - r.mean();
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= r.size();
  m4 /= r.size();
  EXPECT_GT(m4 / (m2 * m2) - 3.0, 2.0);
  EXPECT_EQ(r, synth::student_t_noise(1 << 14, 3.0, 4));
  EXPECT_THROW(synth::student_t_noise(1024, 0.0, 1), Error);
}

TEST(Cascade, TwoLevelsByHand) {
  const ReturnSeries c = synth::binomial_cascade({2, 0.6});
  ASSERT_EQ(c.size(), 4u);
  EXPECT_NEAR(c[0], 0.16, 1e-15);
  EXPECT_NEAR(c[1], 0.24, 1e-15);
  EXPECT_NEAR(c[2], 0.24, 1e-15);
  EXPECT_NEAR(c[3], 0.36, 1e-15);
}

TEST(Cascade, MassSumsToOne) {
  for (int k : {1, 5, 13, 16}) {
    const ReturnSeries c = synth::binomial_cascade({k, 0.7});
    EXPECT_EQ(c.size(), std::size_t{1} << k);
    EXPECT_NEAR(std::accumulate(c.values().begin(), c.values().end(), 0.0), 1.0, 1e-12);
  }
}

TEST(Cascade, RejectsBadParams) {
  EXPECT_THROW(synth::binomial_cascade({0, 0.6}), Error);
  EXPECT_THROW(synth::binomial_cascade({25, 0.6}), Error);
  EXPECT_THROW(synth::binomial_cascade({10, 0.5}), Error);
  EXPECT_THROW(synth::binomial_cascade({10, 1.0}), Error);
}

TEST(Cascade, AnalyticHurstValues) {
  const synth::CascadeParams p{13, 0.6};
  EXPECT_NEAR(synth::analytic_cascade_hurst(p, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(synth::analytic_cascade_hurst(p, 2.0), 0.5 - std::log(0.52) / (2.0 * std::log(2.0)), 1e-14);
  EXPECT_NEAR(synth::analytic_cascade_hurst(p, 2.0), 0.9717, 1e-4);
  // the q = 0 branch is the limit of the general formula
  EXPECT_NEAR(synth::analytic_cascade_hurst(p, 0.0), synth::analytic_cascade_hurst(p, 1e-6), 1e-5);
  // decreasing in q
  double prev = synth::analytic_cascade_hurst(p, -5.0);
  for (double q = -4.75; q <= 5.0; q += 0.25) {
    const double h = synth::analytic_cascade_hurst(p, q);
    EXPECT_LT(h, prev);
    prev = h;
  }
}

TEST(Cascade, EstimatorImprovesWithDepth) {
  auto error_at = [](int k) {
    const synth::CascadeParams p{k, 0.6};
    const ReturnSeries c = synth::binomial_cascade(p);
    MfdfaParams params;
    params.scales = make_scale_grid(c.size(), 16, c.size() / 4, 12);
    params.q = make_q_grid(-2, 2, 0.5);
    const auto a = analyze(c, params);
    double worst = 0;
    for (std::size_t i = 0; i < a.spectrum.hurst.q.size(); ++i) {
      worst = std::max(worst, std::abs(a.spectrum.hurst.h[i] -
                                       synth::analytic_cascade_hurst(p, a.spectrum.hurst.q[i])));
    }
    return worst;
  };
  const double e10 = error_at(10), e16 = error_at(16);
  EXPECT_LT(e16, 0.1);
  EXPECT_LE(e16, e10 + 0.01);
}
