#include "rds/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "rds/errors.hpp"
#include "rds/io.hpp"

namespace rds {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_key(std::string_view k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' ||
           c == '.';
  });
}

std::string canonical(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  if (key == "model") return "coefficients.kind";
  return key;
}

std::string where(const std::string& key, int line) {
  return line > 0 ? "key '" + key + "'" : "option --" + key;
}

double parse_double(const std::string& key, const Config::Entry& e) {
  const std::string_view v = trim(e.value);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError(where(key, e.line) + ": expected a finite real, got '" + e.value + "'", e.line);
  return x;
}

template <class Int>
Int parse_integer(const std::string& key, const Config::Entry& e) {
  const std::string_view v = trim(e.value);
  Int x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec == std::errc() && ptr == v.data() + v.size()) return x;
  // Accept integral reals such as 1e5.
  const double d = parse_double(key, e);
  if (d == std::floor(d) && std::abs(d) < 9e15 && (d >= 0 || std::is_signed_v<Int>)) return static_cast<Int>(d);
  throw ConfigError(where(key, e.line) + ": expected an integer, got '" + e.value + "'", e.line);
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config cfg;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!name.empty() && !valid_key(name)) throw ConfigError("invalid section name", line_no);
      section = std::string(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError("invalid key '" + std::string(key) + "'", line_no);
    if (value.empty()) throw ConfigError("empty value for key '" + std::string(key) + "'", line_no);
    std::string full = section.empty() ? std::string(key) : section + "." + std::string(key);
    if (cfg.has(canonical(full))) throw ConfigError("duplicate key '" + full + "'", line_no);
    cfg.set(std::move(full), std::string(value), line_no);
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError("cannot read config file " + path.string());
  }
  return parse(text);
}

void Config::set(std::string key, std::string value, int line) {
  entries_[canonical(std::move(key))] = Entry{std::move(value), line};
}

void Config::apply_overrides(const std::vector<std::pair<std::string, std::string>>& overrides) {
  for (const auto& [k, v] : overrides) {
    if (!valid_key(k)) throw ConfigError("invalid option --" + k);
    set(k, v, 0);
  }
}

const Config::Entry& Config::require(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
  return it->second;
}

std::string Config::get_string(const std::string& key) const { return require(key).value; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const { return parse_double(key, require(key)); }

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t Config::get_int(const std::string& key) const { return parse_integer<std::int64_t>(key, require(key)); }

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_uint(const std::string& key) const {
  return parse_integer<std::uint64_t>(key, require(key));
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? get_uint(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& e = require(key);
  const auto v = trim(e.value);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(where(key, e.line) + ": expected a boolean, got '" + e.value + "'", e.line);
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  const auto& e = require(key);
  std::vector<double> out;
  std::string_view rest = e.value;
  while (true) {
    const auto comma = rest.find(',');
    Entry part{std::string(trim(rest.substr(0, comma))), e.line};
    out.push_back(parse_double(key, part));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::vector<double> Config::get_doubles(const std::string& key, std::vector<double> fallback) const {
  return has(key) ? get_doubles(key) : fallback;
}

void Config::check_keys(const std::vector<std::string>& allowed) const {
  for (const auto& [k, e] : entries_) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ConfigError("unknown " + where(k, e.line), e.line);
  }
}

CoefficientModel model_from_config(const Config& cfg) {
  const std::string kind = cfg.get_string("coefficients.kind");
  const auto line = cfg.entries().at("coefficients.kind").line;
  try {
    if (kind == "rademacher") return CoefficientModel::rademacher();
    if (kind == "gauss-real") return CoefficientModel::gauss_real(cfg.get_double("coefficients.sigma", 1.0));
    if (kind == "gauss-complex") return CoefficientModel::gauss_complex();
    if (kind == "circle") return CoefficientModel::circle();
    if (kind == "two-point")
      return CoefficientModel::two_point({cfg.get_double("coefficients.a_re", 1.0), cfg.get_double("coefficients.a_im", 0.0)},
                                         cfg.get_double("coefficients.p", 0.5));
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("coefficients: ") + e.what(), line);
  }
  throw ConfigError("unknown coefficient model '" + kind +
                        "' (expected rademacher, gauss-real, gauss-complex, circle or two-point)",
                    line);
}

}  // namespace rds
