#pragma once

// Run configuration, the end-to-end pipeline and its serialized outputs:
// the JSON report, the width summary table and per-series plot data.

#include <openssl/evp.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mfdfa/analysis.hpp"
#include "mfdfa/error.hpp"
#include "mfdfa/io.hpp"
#include "mfdfa/surrogates.hpp"

namespace mfdfa {

inline constexpr const char* kToolName = "mfdfa";
inline constexpr const char* kToolVersion = "1.0.0";

enum class InputMode { Prices, Returns };

struct RunConfig {
  std::filesystem::path inputPath;
  std::vector<std::string> columns;
  InputMode mode = InputMode::Prices;
  std::size_t scaleMin = MfdfaParams::kDefaultScaleMin;
  std::size_t scaleMax = MfdfaParams::kDefaultScaleMax;
  std::size_t scaleCount = MfdfaParams::kDefaultScaleCount;
  double qMin = MfdfaParams::kDefaultQMin;
  double qMax = MfdfaParams::kDefaultQMax;
  double qStep = MfdfaParams::kDefaultQStep;
  int detrendOrder = 1;
  std::vector<SurrogateKind> surrogates{SurrogateKind::Shuffle, SurrogateKind::PhaseRandomize};
  std::size_t realizations = 100;
  std::uint64_t masterSeed = 20180724;
  Aggregation aggregation = Aggregation::MeanOfWidths;
  /// Not echoed into the report: worker count never changes results.
  unsigned threads = 0;

  MfdfaParams params(std::size_t length) const {
    if (detrendOrder < 1 || detrendOrder > 3) {
      throw Error(ErrorCode::InvalidParams, "detrend order must be 1, 2 or 3");
    }
    MfdfaParams p;
    p.order = detrendOrder;
    p.scales = make_scale_grid(length, scaleMin, scaleMax, scaleCount, detrendOrder);
    p.q = make_q_grid(qMin, qMax, qStep);
    return p;
  }

  friend bool operator==(const RunConfig& a, const RunConfig& b) {
    return a.inputPath == b.inputPath && a.columns == b.columns && a.mode == b.mode &&
           a.scaleMin == b.scaleMin && a.scaleMax == b.scaleMax && a.scaleCount == b.scaleCount &&
           a.qMin == b.qMin && a.qMax == b.qMax && a.qStep == b.qStep &&
           a.detrendOrder == b.detrendOrder && a.surrogates == b.surrogates &&
           a.realizations == b.realizations && a.masterSeed == b.masterSeed &&
           a.aggregation == b.aggregation;
  }
};

struct Table1Row {
  std::string series;
  double original = 0.0;
  std::optional<double> shuffled;
  std::optional<double> phaseRandomized;
  friend bool operator==(const Table1Row&, const Table1Row&) = default;
};

struct SeriesResult {
  std::string name;
  std::string column;
  std::size_t rowsRead = 0;
  std::size_t skippedRows = 0;
  std::string firstDate;
  std::string lastDate;
  ValidationSummary validation;
  FluctuationSurface surface;
  SpectrumReport original;
  std::vector<SurrogateEnsembleResult> surrogates;
  Table1Row summary;
  friend bool operator==(const SeriesResult&, const SeriesResult&) = default;
};

struct AnalysisReport {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  RunConfig config;
  std::string inputSha256;
  std::vector<SeriesResult> series;
  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Io, "SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

/// Full analysis of one return series: original spectrum, every configured
/// surrogate ensemble, and the summary row copied from those results.
inline SeriesResult analyze_series(const std::string& name, const ReturnSeries& returns,
                                   const RunConfig& cfg) {
  const MfdfaParams params = cfg.params(returns.size());
  SeriesResult out;
  out.name = name;
  out.column = name;
  out.validation = validate_series(returns);
  SeriesAnalysis original = analyze(returns, params);
  out.surface = std::move(original.surface);
  out.original = std::move(original.spectrum);
  out.summary.series = io::display_name(name);
  out.summary.original = out.original.measure.deltaAlpha;
  for (SurrogateKind kind : cfg.surrogates) {
    SurrogateConfig sc;
    sc.kind = kind;
    sc.realizations = cfg.realizations;
    sc.masterSeed = cfg.masterSeed;
    sc.aggregation = cfg.aggregation;
    sc.threads = cfg.threads;
    out.surrogates.push_back(ensemble_analysis(returns, sc, params));
    const double w = out.surrogates.back().reportedWidth;
    (kind == SurrogateKind::Shuffle ? out.summary.shuffled : out.summary.phaseRandomized) = w;
  }
  return out;
}

inline AnalysisReport run_pipeline(const RunConfig& cfg) {
  if (cfg.columns.empty() && cfg.mode == InputMode::Prices) {
    throw Error(ErrorCode::InvalidParams, "no column selected");
  }
  const std::string where = cfg.inputPath.string();
  AnalysisReport report;
  report.config = cfg;
  try {
    report.inputSha256 = sha256_hex(io::read_file_bytes(cfg.inputPath));
  } catch (const Error& e) {
    throw e.with_context(where);
  }

  std::vector<std::string> columns = cfg.columns;
  if (columns.empty()) columns.push_back("returns");
  for (const std::string& column : columns) {
    const std::string context = where + " [" + column + "]";
    try {
      SeriesResult result;
      if (cfg.mode == InputMode::Prices) {
        io::RateTable table = io::parse_rate_csv(cfg.inputPath, column);
        const ReturnSeries returns = compute_log_returns(table.prices);
        result = analyze_series(column, returns, cfg);
        result.rowsRead = table.rowsRead;
        result.skippedRows = table.skippedRows;
        result.firstDate = table.prices.labels.front();
        result.lastDate = table.prices.labels.back();
      } else {
        io::ReturnsFile file = io::read_returns_file(cfg.inputPath, cfg.columns.empty() ? "" : column);
        const std::size_t rows = file.values.size() + file.skippedRows;
        result = analyze_series(column, ReturnSeries(std::move(file.values)), cfg);
        result.rowsRead = rows;
        result.skippedRows = file.skippedRows;
      }
      report.series.push_back(std::move(result));
    } catch (const Error& e) {
      throw e.with_context(context);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;

inline void to_json(json& j, const ScaleGrid& g) { j = g.scales; }
inline void from_json(const json& j, ScaleGrid& g) { j.get_to(g.scales); }
inline void to_json(json& j, const QGrid& g) { j = g.values; }
inline void from_json(const json& j, QGrid& g) { j.get_to(g.values); }

inline void to_json(json& j, const FluctuationSurface& s) {
  j = json{{"q", s.q},
           {"scales", s.scales},
           {"detrend_order", s.detrendOrder},
           {"values", s.values},
           {"floored_segments", s.flooredSegments},
           {"monotone_in_q", s.monotoneInQ}};
  if (!s.segmentVariances.empty()) j["segment_variances"] = s.segmentVariances;
}
inline void from_json(const json& j, FluctuationSurface& s) {
  j.at("q").get_to(s.q);
  j.at("scales").get_to(s.scales);
  j.at("detrend_order").get_to(s.detrendOrder);
  j.at("values").get_to(s.values);
  j.at("floored_segments").get_to(s.flooredSegments);
  j.at("monotone_in_q").get_to(s.monotoneInQ);
  s.segmentVariances.clear();
  if (j.contains("segment_variances")) j.at("segment_variances").get_to(s.segmentVariances);
}

inline void to_json(json& j, const HurstSpectrum& h) {
  j = json{{"q", h.q},
           {"h", h.h},
           {"std_error", h.stdError},
           {"r_squared", h.rSquared},
           {"fit_scale_min", h.fitScaleMin},
           {"fit_scale_max", h.fitScaleMax}};
}
inline void from_json(const json& j, HurstSpectrum& h) {
  j.at("q").get_to(h.q);
  j.at("h").get_to(h.h);
  j.at("std_error").get_to(h.stdError);
  j.at("r_squared").get_to(h.rSquared);
  j.at("fit_scale_min").get_to(h.fitScaleMin);
  j.at("fit_scale_max").get_to(h.fitScaleMax);
}

inline void to_json(json& j, const MassExponentCurve& t) { j = json{{"q", t.q}, {"tau", t.tau}}; }
inline void from_json(const json& j, MassExponentCurve& t) {
  j.at("q").get_to(t.q);
  j.at("tau").get_to(t.tau);
}

inline void to_json(json& j, const SingularitySpectrum& s) {
  j = json{{"q", s.q},
           {"alpha", s.alpha},
           {"f_alpha", s.fAlpha},
           {"alpha_min", s.alphaMin},
           {"alpha_max", s.alphaMax}};
}
inline void from_json(const json& j, SingularitySpectrum& s) {
  j.at("q").get_to(s.q);
  j.at("alpha").get_to(s.alpha);
  j.at("f_alpha").get_to(s.fAlpha);
  j.at("alpha_min").get_to(s.alphaMin);
  j.at("alpha_max").get_to(s.alphaMax);
}

inline void to_json(json& j, const MultifractalityMeasure& m) {
  j = json{{"delta_alpha", m.deltaAlpha}, {"delta_h", m.deltaH},  {"h_range", m.hRange},
           {"q_min", m.qMin},             {"q_max", m.qMax},      {"negative_by_noise", m.negativeByNoise}};
}
inline void from_json(const json& j, MultifractalityMeasure& m) {
  j.at("delta_alpha").get_to(m.deltaAlpha);
  j.at("delta_h").get_to(m.deltaH);
  j.at("h_range").get_to(m.hRange);
  j.at("q_min").get_to(m.qMin);
  j.at("q_max").get_to(m.qMax);
  j.at("negative_by_noise").get_to(m.negativeByNoise);
}

inline void to_json(json& j, const SpectrumReport& r) {
  j = json{{"hurst", r.hurst}, {"mass", r.mass}, {"singularity", r.singularity}, {"measure", r.measure}};
}
inline void from_json(const json& j, SpectrumReport& r) {
  j.at("hurst").get_to(r.hurst);
  j.at("mass").get_to(r.mass);
  j.at("singularity").get_to(r.singularity);
  j.at("measure").get_to(r.measure);
}

inline void to_json(json& j, const SurrogateEnsembleResult& e) {
  j = json{{"kind", to_string(e.kind)},
           {"aggregation", to_string(e.aggregation)},
           {"realizations", e.realizations},
           {"master_seed", e.masterSeed},
           {"seeds_used", e.seedsUsed},
           {"per_realization_widths", e.perRealizationWidths},
           {"skipped", e.skipped},
           {"mean_width", e.meanWidth},
           {"std_width", e.stdWidth},
           {"q", e.q},
           {"mean_hurst", e.meanHurst},
           {"reported_width", e.reportedWidth}};
}
inline void from_json(const json& j, SurrogateEnsembleResult& e) {
  e.kind = parse_surrogate_kind(j.at("kind").get<std::string>());
  e.aggregation = parse_aggregation(j.at("aggregation").get<std::string>());
  j.at("realizations").get_to(e.realizations);
  j.at("master_seed").get_to(e.masterSeed);
  j.at("seeds_used").get_to(e.seedsUsed);
  j.at("per_realization_widths").get_to(e.perRealizationWidths);
  j.at("skipped").get_to(e.skipped);
  j.at("mean_width").get_to(e.meanWidth);
  j.at("std_width").get_to(e.stdWidth);
  j.at("q").get_to(e.q);
  j.at("mean_hurst").get_to(e.meanHurst);
  j.at("reported_width").get_to(e.reportedWidth);
}

inline void to_json(json& j, const ValidationSummary& v) {
  j = json{{"length", v.length},     {"zero_count", v.zeroCount}, {"zero_fraction", v.zeroFraction},
           {"mean", v.mean},         {"variance", v.variance},    {"zero_warning", v.zeroWarning}};
}
inline void from_json(const json& j, ValidationSummary& v) {
  j.at("length").get_to(v.length);
  j.at("zero_count").get_to(v.zeroCount);
  j.at("zero_fraction").get_to(v.zeroFraction);
  j.at("mean").get_to(v.mean);
  j.at("variance").get_to(v.variance);
  j.at("zero_warning").get_to(v.zeroWarning);
}

inline void to_json(json& j, const Table1Row& r) {
  j = json{{"series", r.series}, {"original", r.original}};
  j["shuffled"] = r.shuffled ? json(*r.shuffled) : json(nullptr);
  j["phase_randomized"] = r.phaseRandomized ? json(*r.phaseRandomized) : json(nullptr);
}
inline void from_json(const json& j, Table1Row& r) {
  j.at("series").get_to(r.series);
  j.at("original").get_to(r.original);
  r.shuffled.reset();
  r.phaseRandomized.reset();
  if (!j.at("shuffled").is_null()) r.shuffled = j.at("shuffled").get<double>();
  if (!j.at("phase_randomized").is_null()) r.phaseRandomized = j.at("phase_randomized").get<double>();
}

inline void to_json(json& j, const RunConfig& c) {
  std::vector<std::string> kinds;
  for (SurrogateKind k : c.surrogates) kinds.emplace_back(to_string(k));
  j = json{{"input", c.inputPath.generic_string()},
           {"columns", c.columns},
           {"mode", c.mode == InputMode::Prices ? "prices" : "returns"},
           {"scale_min", c.scaleMin},
           {"scale_max", c.scaleMax},
           {"scale_count", c.scaleCount},
           {"q_min", c.qMin},
           {"q_max", c.qMax},
           {"q_step", c.qStep},
           {"detrend_order", c.detrendOrder},
           {"surrogates", kinds},
           {"realizations", c.realizations},
           {"master_seed", c.masterSeed},
           {"aggregation", to_string(c.aggregation)}};
}
inline void from_json(const json& j, RunConfig& c) {
  c.inputPath = j.at("input").get<std::string>();
  j.at("columns").get_to(c.columns);
  c.mode = j.at("mode").get<std::string>() == "prices" ? InputMode::Prices : InputMode::Returns;
  j.at("scale_min").get_to(c.scaleMin);
  j.at("scale_max").get_to(c.scaleMax);
  j.at("scale_count").get_to(c.scaleCount);
  j.at("q_min").get_to(c.qMin);
  j.at("q_max").get_to(c.qMax);
  j.at("q_step").get_to(c.qStep);
  j.at("detrend_order").get_to(c.detrendOrder);
  c.surrogates.clear();
  for (const auto& k : j.at("surrogates")) c.surrogates.push_back(parse_surrogate_kind(k.get<std::string>()));
  j.at("realizations").get_to(c.realizations);
  j.at("master_seed").get_to(c.masterSeed);
  c.aggregation = parse_aggregation(j.at("aggregation").get<std::string>());
}

inline void to_json(json& j, const SeriesResult& s) {
  j = json{{"name", s.name},
           {"column", s.column},
           {"rows_read", s.rowsRead},
           {"skipped_rows", s.skippedRows},
           {"first_date", s.firstDate},
           {"last_date", s.lastDate},
           {"validation", s.validation},
           {"surface", s.surface},
           {"original", s.original},
           {"surrogates", s.surrogates},
           {"summary", s.summary}};
}
inline void from_json(const json& j, SeriesResult& s) {
  j.at("name").get_to(s.name);
  j.at("column").get_to(s.column);
  j.at("rows_read").get_to(s.rowsRead);
  j.at("skipped_rows").get_to(s.skippedRows);
  j.at("first_date").get_to(s.firstDate);
  j.at("last_date").get_to(s.lastDate);
  j.at("validation").get_to(s.validation);
  j.at("surface").get_to(s.surface);
  j.at("original").get_to(s.original);
  j.at("surrogates").get_to(s.surrogates);
  j.at("summary").get_to(s.summary);
}

inline void to_json(json& j, const AnalysisReport& r) {
  j = json{{"tool", r.tool},
           {"version", r.version},
           {"config", r.config},
           {"input_sha256", r.inputSha256},
           {"series", r.series}};
}
inline void from_json(const json& j, AnalysisReport& r) {
  j.at("tool").get_to(r.tool);
  j.at("version").get_to(r.version);
  j.at("config").get_to(r.config);
  j.at("input_sha256").get_to(r.inputSha256);
  j.at("series").get_to(r.series);
}

// ---------------------------------------------------------------------------
// Emitters

enum class ReportFormat { Json, Table };

inline std::string report_json(const AnalysisReport& report) { return json(report).dump(1, '\t') + "\n"; }

/// Summary table: one row per series; a column per configured surrogate kind.
inline std::string table1_text(const AnalysisReport& report) {
  bool withShuffle = false, withPhase = false;
  for (const auto& s : report.series) {
    withShuffle = withShuffle || s.summary.shuffled.has_value();
    withPhase = withPhase || s.summary.phaseRandomized.has_value();
  }
  std::string out = "Series\tOriginal";
  if (withShuffle) out += "\tShuffled";
  if (withPhase) out += "\tPhaseRandomized";
  out += '\n';
  for (const auto& s : report.series) {
    out += s.summary.series + '\t' + io::format_number(s.summary.original);
    if (withShuffle) out += '\t' + (s.summary.shuffled ? io::format_number(*s.summary.shuffled) : "");
    if (withPhase) {
      out += '\t' + (s.summary.phaseRandomized ? io::format_number(*s.summary.phaseRandomized) : "");
    }
    out += '\n';
  }
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

inline void emit_report(const AnalysisReport& report, const std::filesystem::path& path,
                        ReportFormat format) {
  write_text(path, format == ReportFormat::Json ? report_json(report) : table1_text(report));
}

inline AnalysisReport read_report(const std::filesystem::path& path) {
  try {
    return json::parse(io::read_file_bytes(path)).get<AnalysisReport>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidParams, "malformed report '" + path.string() + "': " + e.what());
  }
}

/// Four tab-separated files per series: <name>_scaling.tsv (ln F_q against
/// ln a for q nearest -5, 0, +5), <name>_hurst.tsv, <name>_mass.tsv and
/// <name>_spectrum.tsv.
inline std::vector<std::filesystem::path> emit_plot_data(const AnalysisReport& report,
                                                         const std::filesystem::path& dir) {
  using io::format_number;
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const SeriesResult& s : report.series) {
    const std::string stem = io::display_name(s.name);
    const FluctuationSurface& surf = s.surface;

    std::string scaling = "ln_a";
    std::vector<std::size_t> picks;
    for (double target : {-5.0, 0.0, 5.0}) {
      picks.push_back(nearest_index(surf.q.values, target));
      scaling += "\tln_F_q=" + format_number(surf.q.values[picks.back()]);
    }
    scaling += '\n';
    for (std::size_t ia = 0; ia < surf.scales.size(); ++ia) {
      scaling += format_number(std::log(static_cast<double>(surf.scales.scales[ia])));
      for (std::size_t iq : picks) scaling += '\t' + format_number(std::log(surf.at(iq, ia)));
      scaling += '\n';
    }

    const HurstSpectrum& h = s.original.hurst;
    std::string hurst = "q\th\tstd_error\tr_squared\n";
    for (std::size_t i = 0; i < h.size(); ++i) {
      hurst += format_number(h.q[i]) + '\t' + format_number(h.h[i]) + '\t' +
               format_number(h.stdError[i]) + '\t' + format_number(h.rSquared[i]) + '\n';
    }

    const MassExponentCurve& t = s.original.mass;
    std::string mass = "q\ttau\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
      mass += format_number(t.q[i]) + '\t' + format_number(t.tau[i]) + '\n';
    }

    const SingularitySpectrum& f = s.original.singularity;
    std::string spectrum = "q\talpha\tf_alpha\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
      spectrum += format_number(f.q[i]) + '\t' + format_number(f.alpha[i]) + '\t' +
                  format_number(f.fAlpha[i]) + '\n';
    }

    for (auto [suffix, text] : {std::pair{"_scaling.tsv", &scaling}, std::pair{"_hurst.tsv", &hurst},
                                std::pair{"_mass.tsv", &mass}, std::pair{"_spectrum.tsv", &spectrum}}) {
      const auto path = dir / (stem + suffix);
      write_text(path, *text);
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace mfdfa
