#pragma once

#include <cstdio>
#include <string>
#include <string_view>

#include "gausskey/error.hpp"
#include "gausskey/numeric.hpp"

namespace gausskey {

enum class RateUnit { Nats, Bits };

inline RateUnit parse_rate_unit(std::string_view text) {
  if (text == "nats") return RateUnit::Nats;
  if (text == "bits") return RateUnit::Bits;
  throw Error(ErrorCode::ConfigError, "units must be 'nats' or 'bits', got '" + std::string(text) + "'");
}

inline std::string_view unit_suffix(RateUnit unit) { return unit == RateUnit::Nats ? "nats" : "bits"; }

inline double convert_rate(double nats, RateUnit unit) {
  return unit == RateUnit::Nats ? nats : nats / numeric::kLn2;
}

/// 12 significant digits, shortest of fixed/scientific ("%.12g").
inline std::string fmt12(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace gausskey
