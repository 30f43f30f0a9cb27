#pragma once

// Delimited-text ingestion of reference-rate tables and raw return files.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "mfdfa/error.hpp"
#include "mfdfa/series.hpp"

namespace mfdfa::io {

inline std::string trim(std::string_view s) {
  auto isSpace = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && isSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && isSpace(s.back())) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

inline std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

/// Tab if the header has one, else semicolon if it has no comma, else comma.
inline char detect_delimiter(std::string_view header) {
  if (header.find('\t') != std::string_view::npos) return '\t';
  if (header.find(',') == std::string_view::npos && header.find(';') != std::string_view::npos) {
    return ';';
  }
  return ',';
}

inline std::vector<std::string> split(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(delim, pos);
    out.push_back(trim(line.substr(pos, next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

inline std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

/// Shortest text that parses back to exactly `v`, at most 17 significant digits.
inline std::string format_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

/// Accepts YYYY-MM-DD or DD/MM/YYYY; returns the day number since epoch.
inline std::optional<std::chrono::sys_days> parse_date(std::string_view s) {
  int y = 0, m = 0, d = 0;
  auto num = [](std::string_view t, int& out) {
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc() && ptr == t.data() + t.size();
  };
  bool ok = false;
  if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    ok = num(s.substr(0, 4), y) && num(s.substr(5, 2), m) && num(s.substr(8, 2), d);
  } else if (s.size() == 10 && s[2] == '/' && s[5] == '/') {
    ok = num(s.substr(0, 2), d) && num(s.substr(3, 2), m) && num(s.substr(6, 4), y);
  }
  if (!ok) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days{ymd};
}

inline std::string iso_date(std::chrono::sys_days day) {
  const std::chrono::year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

/// Canonical currency code for common header spellings (EUR/Euro, JPY/Yen).
inline std::string canonical_column(std::string_view name) {
  std::string u = upper(trim(name));
  if (u == "EURO") return "EUR";
  if (u == "YEN") return "JPY";
  if (u == "POUND" || u == "GBP STERLING") return "GBP";
  if (u == "DOLLAR" || u == "US DOLLAR") return "USD";
  return u;
}

/// Display name used in summary tables.
inline std::string display_name(std::string_view column) {
  const std::string c = canonical_column(column);
  if (c == "EUR") return "Euro";
  if (c == "JPY") return "Yen";
  return c.empty() ? std::string(column) : c;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (!lines.empty() && lines.front().starts_with("\xEF\xBB\xBF")) lines.front().erase(0, 3);
  return lines;
}

struct RateTable {
  PriceSeries prices;
  std::string column;
  std::size_t rowsRead = 0;
  /// Rows dropped because the chosen cell was blank or not a number.
  std::size_t skippedRows = 0;
};

/// Reference-rate layout: header row, first column a date, one column per
/// currency. Blank or non-numeric cells in the chosen column are skipped and
/// counted; the remaining dates must be strictly increasing.
inline RateTable parse_rate_csv(const std::filesystem::path& path, std::string_view column) {
  std::vector<std::string> lines = read_lines(path);
  auto firstNonBlank = std::find_if(lines.begin(), lines.end(),
                                    [](const std::string& l) { return !trim(l).empty(); });
  if (firstNonBlank == lines.end()) throw Error(ErrorCode::EmptySeries, "file has no header row");
  const char delim = detect_delimiter(*firstNonBlank);
  const std::vector<std::string> header = split(*firstNonBlank, delim);

  const std::string want = canonical_column(column);
  std::size_t col = 0;
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (canonical_column(header[i]) == want) {
      col = i;
      break;
    }
  }
  if (col == 0) throw Error(ErrorCode::MissingColumn, "no column named '" + std::string(column) + "'");

  RateTable table;
  table.column = header[col];
  std::optional<std::chrono::sys_days> previous;
  for (auto it = firstNonBlank + 1; it != lines.end(); ++it) {
    if (trim(*it).empty()) continue;
    ++table.rowsRead;
    const std::vector<std::string> cells = split(*it, delim);
    const auto value = col < cells.size() ? parse_number(cells[col]) : std::nullopt;
    if (!value) {
      ++table.skippedRows;
      continue;
    }
    const auto date = parse_date(cells[0]);
    if (!date) {
      throw Error(ErrorCode::InvalidParams, "unreadable date '" + cells[0] + "'");
    }
    if (previous && *date <= *previous) {
      throw Error(ErrorCode::NonMonotoneDates,
                  "date " + cells[0] + " does not follow " + iso_date(*previous));
    }
    previous = date;
    table.prices.values.push_back(*value);
    table.prices.labels.push_back(iso_date(*date));
  }
  if (table.prices.values.empty()) {
    throw Error(ErrorCode::EmptySeries, "column '" + table.column + "' has no numeric rows");
  }
  return table;
}

struct ReturnsFile {
  std::vector<double> values;
  std::size_t skippedRows = 0;
};

/// Raw-returns layout: one value per line (first field), with an optional
/// header line. When the header names `column`, that field is used instead.
inline ReturnsFile read_returns_file(const std::filesystem::path& path, std::string_view column = {}) {
  std::vector<std::string> lines = read_lines(path);
  ReturnsFile out;
  std::size_t field = 0;
  bool first = true;
  char delim = ',';
  for (const std::string& line : lines) {
    if (trim(line).empty()) continue;
    if (first) {
      delim = detect_delimiter(line);
      first = false;
      const std::vector<std::string> cells = split(line, delim);
      if (!parse_number(cells[0])) {
        if (!column.empty()) {
          const auto hit = std::find_if(cells.begin(), cells.end(), [&](const std::string& c) {
            return canonical_column(c) == canonical_column(column);
          });
          if (hit != cells.end()) field = static_cast<std::size_t>(hit - cells.begin());
        }
        continue;
      }
    }
    const std::vector<std::string> cells = split(line, delim);
    const auto v = field < cells.size() ? parse_number(cells[field]) : std::nullopt;
    if (!v) {
      ++out.skippedRows;
      continue;
    }
    out.values.push_back(*v);
  }
  if (out.values.empty()) throw Error(ErrorCode::EmptySeries, "'" + path.string() + "' has no values");
  return out;
}

/// One value per line, round-trip exact.
inline void write_series(const std::filesystem::path& path, std::span<const double> values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  for (double v : values) out << format_number(v) << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

inline std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace mfdfa::io
