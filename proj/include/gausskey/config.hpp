#pragma once

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gausskey/covariance.hpp"
#include "gausskey/error.hpp"

namespace gausskey {

/// Flat `key = value` configuration with `#` comments. Keys outside the
/// known set are rejected, as are duplicates.
class Config {
 public:
  static const std::set<std::string, std::less<>>& known_keys() {
    static const std::set<std::string, std::less<>> keys = {
        "sigma_x", "sigma_y", "sigma_z", "sigma_xy", "sigma_xz", "sigma_yz",  // covariance block
        "grid", "units", "seed", "out", "threads", "trials",                  // common
        "r_p", "noise_var", "n", "gamma", "mode", "size_c", "max_codebook",   // simulate
        "bound_samples", "scalar_step", "scalar_modulus",                     // simulate
        "cells", "block_n", "size_s", "beta", "beta_offset",                  // oracle
    };
    return keys;
  }

  static Config parse(std::istream& in) {
    Config cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const std::string text = trim(line);
      if (text.empty()) continue;
      const auto eq = text.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": expected 'key = value'");
      }
      cfg.set(trim(text.substr(0, eq)), trim(text.substr(eq + 1)), lineno);
    }
    return cfg;
  }

  static Config parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  /// Adds or overrides a key (command-line flags take precedence).
  void override(const std::string& key, const std::string& value) {
    check_known(key, 0);
    values_[key] = value;
  }

  bool has(std::string_view key) const { return values_.find(key) != values_.end(); }

  std::string get_string(std::string_view key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(std::string_view key) const { return to_double(key, require(key)); }
  double get_double(std::string_view key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  std::uint64_t get_uint(std::string_view key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const std::string& text = require(key);
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (errno != 0 || end == text.c_str() || *end != '\0' || text.front() == '-') {
      throw Error(ErrorCode::ConfigError, std::string(key) + ": expected a non-negative integer, got '" + text + "'");
    }
    return v;
  }

  std::vector<double> get_list(std::string_view key) const {
    std::vector<double> out;
    std::stringstream ss(require(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    return out;
  }

  const std::map<std::string, std::string, std::less<>>& values() const noexcept { return values_; }

 private:
  static std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
  }

  static void check_known(const std::string& key, std::size_t lineno) {
    if (!known_keys().contains(key)) {
      throw Error(ErrorCode::ConfigError,
                  (lineno ? "line " + std::to_string(lineno) + ": " : std::string()) + "unknown key '" + key + "'");
    }
  }

  void set(const std::string& key, const std::string& value, std::size_t lineno) {
    check_known(key, lineno);
    if (!values_.emplace(key, value).second) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }

  const std::string& require(std::string_view key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw Error(ErrorCode::ConfigError, "missing key '" + std::string(key) + "'");
    return it->second;
  }

  static double to_double(std::string_view key, const std::string& text) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (errno != 0 || end == text.c_str() || *end != '\0') {
      throw Error(ErrorCode::ConfigError, std::string(key) + ": expected a decimal number, got '" + text + "'");
    }
    return v;
  }

  std::map<std::string, std::string, std::less<>> values_;
};

/// Reads the six covariance keys; all are required.
inline CovarianceTriple covariance_from_config(const Config& cfg) {
  CovarianceTriple c;
  c.sigma_x = cfg.get_double("sigma_x");
  c.sigma_y = cfg.get_double("sigma_y");
  c.sigma_z = cfg.get_double("sigma_z");
  c.sigma_xy = cfg.get_double("sigma_xy");
  c.sigma_xz = cfg.get_double("sigma_xz");
  c.sigma_yz = cfg.get_double("sigma_yz");
  return c;
}

}  // namespace gausskey
