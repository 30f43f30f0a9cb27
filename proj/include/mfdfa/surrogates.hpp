#pragma once

// Shuffled and phase-randomized surrogates, and ensembles of full MFDFA runs
// over them. Shuffling keeps the value distribution and removes temporal
// correlations; phase randomization keeps the power spectrum (hence linear
// correlations) and removes the fat-tail contribution.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mfdfa/analysis.hpp"
#include "mfdfa/error.hpp"
#include "mfdfa/parallel.hpp"
#include "mfdfa/series.hpp"

namespace mfdfa {

enum class SurrogateKind { Shuffle, PhaseRandomize };
enum class Aggregation { MeanOfWidths, WidthOfMeanSpectrum };

constexpr std::string_view to_string(SurrogateKind k) noexcept {
  return k == SurrogateKind::Shuffle ? "shuffle" : "phase";
}
constexpr std::string_view to_string(Aggregation a) noexcept {
  return a == Aggregation::MeanOfWidths ? "mean_of_widths" : "width_of_mean_spectrum";
}

inline SurrogateKind parse_surrogate_kind(std::string_view s) {
  if (s == "shuffle" || s == "shuffled") return SurrogateKind::Shuffle;
  if (s == "phase" || s == "phase_randomized") return SurrogateKind::PhaseRandomize;
  throw Error(ErrorCode::InvalidParams, "unknown surrogate kind '" + std::string(s) + "'");
}
inline Aggregation parse_aggregation(std::string_view s) {
  if (s == "mean_of_widths") return Aggregation::MeanOfWidths;
  if (s == "width_of_mean_spectrum") return Aggregation::WidthOfMeanSpectrum;
  throw Error(ErrorCode::InvalidParams, "unknown aggregation '" + std::string(s) + "'");
}

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Seed of realization `index`, a pure function of (master, index).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) ^ mix64(index + 0x632BE59BD9B4E019ull));
}

inline ReturnSeries shuffle_surrogate(const ReturnSeries& returns, std::uint64_t seed) {
  std::vector<double> values = returns.vector();
  std::mt19937_64 rng(seed);
  std::shuffle(values.begin(), values.end(), rng);
  return ReturnSeries(std::move(values));
}

namespace detail {

// FFTW planning is not thread-safe; execution on distinct arrays is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n), time_(n), freq_(n / 2 + 1) {
    std::lock_guard lock(fftw_planner_mutex());
    // FFTW_UNALIGNED pins the codelet choice, so results do not depend on
    // where the buffers happen to land.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), time_.data(), as_fftw(freq_.data()), flags);
    inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), as_fftw(freq_.data()), time_.data(), flags);
  }
  ~RealFft() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::vector<double>& time() noexcept { return time_; }
  std::vector<std::complex<double>>& freq() noexcept { return freq_; }

  void forward() { fftw_execute(forward_); }
  /// Unnormalized: the result is n times the input signal.
  void inverse() { fftw_execute(inverse_); }

 private:
  static fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

  std::size_t n_;
  std::vector<double> time_;
  std::vector<std::complex<double>> freq_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

}  // namespace detail

/// Plain random-phase surrogate. Bins 1..ceil(M/2)-1 get independent uniform
/// phases; their conjugate partners follow implicitly from the real inverse
/// transform. DC and (for even M) Nyquist stay real.
inline ReturnSeries phase_randomized_surrogate(const ReturnSeries& returns, std::uint64_t seed) {
  const std::size_t n = returns.size();
  if (n < 4) throw Error(ErrorCode::TooShort, "phase randomization needs at least 4 points");

  detail::RealFft fft(n);
  std::copy(returns.values().begin(), returns.values().end(), fft.time().begin());
  fft.forward();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const std::size_t lastRandom = (n + 1) / 2 - 1;
  auto& spec = fft.freq();
  for (std::size_t k = 1; k <= lastRandom; ++k) spec[k] *= std::polar(1.0, phase(rng));
  spec[0] = {spec[0].real(), 0.0};
  if (n % 2 == 0) spec[n / 2] = {spec[n / 2].real(), 0.0};

  fft.inverse();
  std::vector<double> out(fft.time());
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return ReturnSeries(std::move(out));
}

inline ReturnSeries make_surrogate(const ReturnSeries& returns, SurrogateKind kind,
                                   std::uint64_t seed) {
  return kind == SurrogateKind::Shuffle ? shuffle_surrogate(returns, seed)
                                        : phase_randomized_surrogate(returns, seed);
}

struct SurrogateConfig {
  SurrogateKind kind = SurrogateKind::Shuffle;
  std::size_t realizations = 100;
  std::uint64_t masterSeed = 20180724;
  Aggregation aggregation = Aggregation::MeanOfWidths;
  /// Worker threads; 0 = hardware concurrency. Does not affect results.
  unsigned threads = 0;

  void validate() const {
    if (realizations < 1) throw Error(ErrorCode::InvalidParams, "realizations must be >= 1");
  }
};

struct SurrogateEnsembleResult {
  SurrogateKind kind = SurrogateKind::Shuffle;
  Aggregation aggregation = Aggregation::MeanOfWidths;
  std::size_t realizations = 0;
  std::uint64_t masterSeed = 0;
  std::vector<std::uint64_t> seedsUsed;
  /// Widths of the realizations that completed, in realization order.
  std::vector<double> perRealizationWidths;
  /// Realization indices that hit a degenerate series.
  std::vector<std::size_t> skipped;
  double meanWidth = 0.0;
  double stdWidth = 0.0;
  std::vector<double> q;
  std::vector<double> meanHurst;
  /// The aggregate the configuration asks for.
  double reportedWidth = 0.0;
  friend bool operator==(const SurrogateEnsembleResult&, const SurrogateEnsembleResult&) = default;
};

inline SurrogateEnsembleResult ensemble_analysis(const ReturnSeries& returns,
                                                 const SurrogateConfig& cfg,
                                                 const MfdfaParams& params) {
  cfg.validate();
  const std::size_t n = cfg.realizations;

  struct Slot {
    bool ok = false;
    double width = 0.0;
    std::vector<double> h;
  };
  std::vector<Slot> slots(n);
  std::vector<std::uint64_t> seeds(n);
  for (std::size_t r = 0; r < n; ++r) seeds[r] = derive_seed(cfg.masterSeed, r);

  parallel_for(n, cfg.threads, [&](std::size_t r) {
    try {
      const SeriesAnalysis a = analyze(make_surrogate(returns, cfg.kind, seeds[r]), params);
      slots[r] = Slot{true, a.width(), a.spectrum.hurst.h};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateSeries) throw;
    }
  });

  SurrogateEnsembleResult out;
  out.kind = cfg.kind;
  out.aggregation = cfg.aggregation;
  out.realizations = n;
  out.masterSeed = cfg.masterSeed;
  out.seedsUsed = seeds;
  out.q = params.q.values;
  out.meanHurst.assign(params.q.size(), 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    if (!slots[r].ok) {
      out.skipped.push_back(r);
      continue;
    }
    out.perRealizationWidths.push_back(slots[r].width);
    for (std::size_t i = 0; i < out.meanHurst.size(); ++i) out.meanHurst[i] += slots[r].h[i];
  }
  const std::size_t done = out.perRealizationWidths.size();
  if (done == 0) {
    throw Error(ErrorCode::DegenerateSeries,
                "every " + std::string(to_string(cfg.kind)) + " surrogate was degenerate");
  }
  for (double& v : out.meanHurst) v /= static_cast<double>(done);

  CompensatedSum sum;
  for (double w : out.perRealizationWidths) sum.add(w);
  out.meanWidth = sum.value() / static_cast<double>(done);
  if (done > 1) {
    CompensatedSum sq;
    for (double w : out.perRealizationWidths) sq.add((w - out.meanWidth) * (w - out.meanWidth));
    out.stdWidth = std::sqrt(sq.value() / static_cast<double>(done - 1));
  }

  if (cfg.aggregation == Aggregation::MeanOfWidths) {
    out.reportedWidth = out.meanWidth;
  } else {
    HurstSpectrum mean;
    mean.q = out.q;
    mean.h = out.meanHurst;
    out.reportedWidth = legendre_spectrum(mass_exponents(mean)).width();
  }
  return out;
}

}  // namespace mfdfa
