#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gausskey {

enum class ErrorCode {
  NotPositiveDefinite,
  ZeroXYCorrelation,
  NegativePublicRate,
  KeyRateAtOrAboveBound,
  NoSolution,
  BlockTooLarge,
  KeyRateNonpositive,
  CodebookTooLarge,
  EmptyBin,
  IntegrationFailure,
  StateSpaceTooLarge,
  InvalidArgument,
  ConfigError,
  IoError,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::ZeroXYCorrelation: return "ZeroXYCorrelation";
    case ErrorCode::NegativePublicRate: return "NegativePublicRate";
    case ErrorCode::KeyRateAtOrAboveBound: return "KeyRateAtOrAboveBound";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::BlockTooLarge: return "BlockTooLarge";
    case ErrorCode::KeyRateNonpositive: return "KeyRateNonpositive";
    case ErrorCode::CodebookTooLarge: return "CodebookTooLarge";
    case ErrorCode::EmptyBin: return "EmptyBin";
    case ErrorCode::IntegrationFailure: return "IntegrationFailure";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code; the
/// CLI maps codes to exit statuses and prints error_name() on stderr.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace gausskey
