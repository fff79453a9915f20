#pragma once

// Run configuration: defaults, then a key=value file, then the environment
// (GQ_WORKERS, GQ_BUDGET), then command-line flags.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gq/error.hpp"

namespace gq {

struct RunConfig {
  int workers = 1;
  double budget_seconds = 3600;
  std::uint64_t enum_bound = 1ULL << 20;  // largest group listed element by element
  std::string out_dir = ".";
  std::vector<std::string> formats{"md"};
  std::map<std::uint64_t, std::vector<int>> moduli;  // q -> coefficients, low degree first
  std::uint64_t seed = 0;

  void validate() const {
    if (workers < 1) throw SpecMismatch("workers must be at least 1, got " + std::to_string(workers));
    if (!(budget_seconds > 0)) throw SpecMismatch("budget must be positive");
    for (const auto& f : formats)
      if (f != "json" && f != "md" && f != "csv") throw SpecMismatch("unknown output format '" + f + "'");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream in(v);
  T x{};
  if (!(in >> x) || !(in >> std::ws).eof()) throw ParseError("bad value for " + key + ": '" + v + "'");
  return x;
}

}  // namespace detail

/// "1,1,0,1" -> {1, 1, 0, 1}.
inline std::vector<int> parse_modulus(const std::string& s) {
  std::vector<int> out;
  for (const auto& t : detail::split(s, ',')) out.push_back(detail::parse_number<int>("modulus", t));
  if (out.empty()) throw ParseError("empty modulus");
  return out;
}

/// Applies one setting. Keys: workers, budget, enum_bound, out_dir, formats,
/// seed, and modulus.<q>.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  using detail::parse_number;
  if (key == "workers") c.workers = parse_number<int>(key, value);
  else if (key == "budget") c.budget_seconds = parse_number<double>(key, value);
  else if (key == "enum_bound") c.enum_bound = parse_number<std::uint64_t>(key, value);
  else if (key == "out_dir") c.out_dir = value;
  else if (key == "formats") c.formats = detail::split(value, ',');
  else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
  else if (key.rfind("modulus.", 0) == 0) c.moduli[parse_number<std::uint64_t>(key, key.substr(8))] = parse_modulus(value);
  else throw ParseError("unknown configuration key '" + key + "'");
}

inline void apply_config_text(RunConfig& c, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config line " + std::to_string(lineno) + " has no '='");
    apply_setting(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
}

inline void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_config_text(c, ss.str());
}

/// Reads GQ_WORKERS and GQ_BUDGET through `getenv` (replaceable for tests).
inline void apply_environment(RunConfig& c, const std::map<std::string, std::string>* env = nullptr) {
  auto get = [&](const char* k) -> std::optional<std::string> {
    if (env) {
      auto it = env->find(k);
      if (it == env->end()) return std::nullopt;
      return it->second;
    }
    const char* v = std::getenv(k);
    if (!v) return std::nullopt;
    return std::string(v);
  };
  if (auto v = get("GQ_WORKERS")) apply_setting(c, "workers", *v);
  if (auto v = get("GQ_BUDGET")) apply_setting(c, "budget", *v);
}

}  // namespace gq
