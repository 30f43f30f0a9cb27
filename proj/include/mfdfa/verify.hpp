#pragma once

// Comparison of a report's summary rows with the published reference widths
// for the four INR exchange-rate series.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mfdfa/report.hpp"

namespace mfdfa {

struct ReferenceWidths {
  const char* series;
  double original;
  double shuffled;
  double phaseRandomized;
};

inline constexpr std::array<ReferenceWidths, 4> kPublishedWidths{{
    {"USD", 0.73166, 0.3351, 0.061393},
    {"GBP", 0.30326, 0.21767, 0.10879},
    {"Euro", 0.23831, 0.14886, 0.10898},
    {"Yen", 0.26528, 0.21841, 0.070942},
}};

inline constexpr double kOriginalWidthTolerance = 0.08;

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline const SeriesResult* find_series(const AnalysisReport& r, const std::string& display) {
  for (const auto& s : r.series) {
    if (s.summary.series == display) return &s;
  }
  return nullptr;
}

inline const SurrogateEnsembleResult* find_ensemble(const SeriesResult& s, SurrogateKind kind) {
  for (const auto& e : s.surrogates) {
    if (e.kind == kind) return &e;
  }
  return nullptr;
}

}  // namespace detail

/// Original widths within +-0.08 of the published values.
inline CheckResult check_original_widths(const AnalysisReport& report) {
  CheckResult c{"original widths within 0.08 of published values", true, ""};
  for (const auto& ref : kPublishedWidths) {
    const SeriesResult* s = detail::find_series(report, ref.series);
    if (!s) {
      c.passed = false;
      c.detail += std::string(ref.series) + " missing; ";
      continue;
    }
    const double got = s->summary.original;
    const bool ok = std::abs(got - ref.original) <= kOriginalWidthTolerance;
    c.passed = c.passed && ok;
    c.detail += std::string(ref.series) + " " + io::format_number(got) + " vs " +
                io::format_number(ref.original) + (ok ? "" : " (out of tolerance)") + "; ";
  }
  return c;
}

/// USD > GBP > Yen > Euro, exactly.
inline CheckResult check_width_ordering(const AnalysisReport& report) {
  CheckResult c{"original width ordering USD > GBP > Yen > Euro", true, ""};
  const std::array<const char*, 4> order{"USD", "GBP", "Yen", "Euro"};
  std::vector<double> widths;
  for (const char* name : order) {
    const SeriesResult* s = detail::find_series(report, name);
    if (!s) {
      c.passed = false;
      c.detail += std::string(name) + " missing; ";
      continue;
    }
    widths.push_back(s->summary.original);
    c.detail += std::string(name) + "=" + io::format_number(s->summary.original) + " ";
  }
  if (widths.size() != order.size()) return c;
  for (std::size_t i = 0; i + 1 < widths.size(); ++i) c.passed = c.passed && widths[i] > widths[i + 1];
  return c;
}

/// USD: phase < 0.5 shuffled < shuffled < original; every series: both
/// surrogate widths below the original. Each surrogate mean is allowed two
/// ensemble standard deviations of slack.
inline CheckResult check_attribution(const AnalysisReport& report) {
  CheckResult c{"surrogate attribution pattern", true, ""};
  for (const auto& ref : kPublishedWidths) {
    const SeriesResult* s = detail::find_series(report, ref.series);
    const SurrogateEnsembleResult* shuf = s ? detail::find_ensemble(*s, SurrogateKind::Shuffle) : nullptr;
    const SurrogateEnsembleResult* phase =
        s ? detail::find_ensemble(*s, SurrogateKind::PhaseRandomize) : nullptr;
    if (!s || !shuf || !phase) {
      c.passed = false;
      c.detail += std::string(ref.series) + " missing surrogate results; ";
      continue;
    }
    const double orig = s->summary.original;
    const double ws = shuf->reportedWidth, wp = phase->reportedWidth;
    bool ok = ws - 2.0 * shuf->stdWidth < orig && wp - 2.0 * phase->stdWidth < orig;
    if (std::string(ref.series) == "USD") {
      ok = ok && wp - 2.0 * phase->stdWidth < 0.5 * ws;
    }
    c.passed = c.passed && ok;
    c.detail += std::string(ref.series) + " orig=" + io::format_number(orig) +
                " shuf=" + io::format_number(ws) + " phase=" + io::format_number(wp) +
                (ok ? "" : " (pattern broken)") + "; ";
  }
  return c;
}

inline std::vector<CheckResult> verify_published_table(const AnalysisReport& report) {
  return {check_original_widths(report), check_width_ordering(report), check_attribution(report)};
}

}  // namespace mfdfa
