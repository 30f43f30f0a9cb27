#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfdfa {

enum class ErrorCode {
  NonPositivePrice,
  TooShort,
  EmptySeries,
  InvalidRange,
  InvalidParams,
  DegenerateSeries,
  MissingColumn,
  NonMonotoneDates,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositivePrice: return "NonPositivePrice";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::EmptySeries: return "EmptySeries";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::DegenerateSeries: return "DegenerateSeries";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonMonotoneDates: return "NonMonotoneDates";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

  // Same code, detail prefixed with where the failure happened.
  Error with_context(const std::string& context) const {
    return Error(code_, context + ": " + detail_);
  }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace mfdfa
