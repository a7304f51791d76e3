#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rds/coefficients.hpp"

namespace rds {

/// Flat key-value configuration. Keys inside a `[section]` are stored as
/// "section.key"; command-line overrides replace file values.
class Config {
 public:
  struct Entry {
    std::string value;
    int line = 0;  // 0 for command-line keys
  };

  static Config parse(std::string_view text);
  static Config load(const std::filesystem::path& path);

  /// `--model` is accepted as an alias of coefficients.kind.
  void set(std::string key, std::string value, int line = 0);
  void apply_overrides(const std::vector<std::pair<std::string, std::string>>& overrides);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  const std::map<std::string, Entry>& entries() const noexcept { return entries_; }

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated reals.
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;

  /// Throws ConfigError naming the first key not in `allowed`.
  void check_keys(const std::vector<std::string>& allowed) const;

 private:
  const Entry& require(const std::string& key) const;
  std::map<std::string, Entry> entries_;
};

/// Builds the coefficient law from coefficients.kind and its parameters
/// (coefficients.sigma, coefficients.a_re, coefficients.a_im, coefficients.p).
CoefficientModel model_from_config(const Config& cfg);

}  // namespace rds
