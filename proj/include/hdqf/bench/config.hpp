#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hdqf::bench {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

/// Flat string parameters with typed accessors.
class Config {
 public:
  Config() = default;
  Config(std::initializer_list<std::pair<const std::string, std::string>> init) : values_(init) {}

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }
  [[nodiscard]] const std::map<std::string, std::string>& values() const noexcept { return values_; }

  [[nodiscard]] const std::string& str(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw std::invalid_argument("missing parameter '" + key + "'");
    return it->second;
  }

  [[nodiscard]] std::uint64_t u64(const std::string& key) const { return parse_u64(key, str(key)); }
  [[nodiscard]] std::size_t size(const std::string& key) const { return static_cast<std::size_t>(u64(key)); }
  [[nodiscard]] int integer(const std::string& key) const {
    const auto& s = str(key);
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) bad(key, s, "an integer");
    return v;
  }
  [[nodiscard]] double real(const std::string& key) const { return parse_real(key, str(key)); }
  [[nodiscard]] bool flag(const std::string& key) const {
    const auto& s = str(key);
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    bad(key, s, "a boolean");
  }

  [[nodiscard]] std::vector<std::size_t> size_list(const std::string& key) const {
    std::vector<std::size_t> out;
    for (const auto& item : split(str(key))) out.push_back(static_cast<std::size_t>(parse_u64(key, item)));
    return out;
  }
  [[nodiscard]] std::vector<double> real_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split(str(key))) out.push_back(parse_real(key, item));
    return out;
  }

  /// Keys from `over` replace keys here.
  void overlay(const Config& over) {
    for (const auto& [k, v] : over.values_) values_[k] = v;
  }

  friend bool operator==(const Config&, const Config&) = default;

 private:
  [[noreturn]] static void bad(const std::string& key, const std::string& v, const char* what) {
    throw std::invalid_argument("parameter '" + key + "' = '" + v + "' is not " + what);
  }
  static std::uint64_t parse_u64(const std::string& key, const std::string& s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) bad(key, s, "a non-negative integer");
    return v;
  }
  static double parse_real(const std::string& key, const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) bad(key, s, "a number");
      return v;
    } catch (const std::logic_error&) {
      bad(key, s, "a number");
    }
  }
  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
      const auto pos = s.find(',', start);
      auto item = trim(std::string_view(s).substr(start, pos == std::string::npos ? std::string::npos : pos - start));
      if (!item.empty()) out.push_back(std::move(item));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return out;
  }

  std::map<std::string, std::string> values_;
};

/// `key = value` lines; `#` starts a comment; blank lines ignored.
inline Config parse_config(std::istream& is, const std::string& origin = "config") {
  Config c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(std::string_view(body).substr(0, eq));
    if (key.empty()) throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
    if (c.has(key)) throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    c.set(key, trim(std::string_view(body).substr(eq + 1)));
  }
  return c;
}

inline Config load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config file " + path);
  return parse_config(is, path);
}

/// Precedence: command line over file over defaults.
inline Config resolve_config(const Config& defaults, const Config& file, const Config& cli) {
  Config c = defaults;
  c.overlay(file);
  c.overlay(cli);
  return c;
}

}  // namespace hdqf::bench
