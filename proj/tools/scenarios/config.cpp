#include "scenarios/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace warplab::cli {

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void validate(const Param& p, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  errno = 0;
  switch (p.type) {
    case ValueType::Real:
      std::strtod(begin, &end);
      break;
    case ValueType::Integer:
      std::strtol(begin, &end, 10);
      break;
    case ValueType::Text:
      return;
  }
  if (value.empty() || end == begin || *end != '\0' || errno == ERANGE)
    throw ConfigError("invalid value '" + value + "' for key '" + p.key + "'");
}
}  // namespace

void Config::declare(const std::string& key, ValueType type, const std::string& value, const std::string& doc) {
  if (has(key)) throw std::logic_error("key declared twice: " + key);
  Param p{key, type, value, doc, "default"};
  validate(p, value);
  params_.push_back(std::move(p));
}

void Config::set(const std::string& key, const std::string& value, const std::string& source) {
  if (!has(key)) throw ConfigError("unknown key '" + key + "'");
  Param& p = find(key);
  validate(p, value);
  p.value = value;
  p.source = source;
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), "file");
  }
}

void Config::apply_overrides(const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + a + "' is not key=value");
    set(trim(a.substr(0, eq)), trim(a.substr(eq + 1)), "cli");
  }
}

bool Config::has(const std::string& key) const {
  return std::any_of(params_.begin(), params_.end(), [&](const Param& p) { return p.key == key; });
}

const Param& Config::find(const std::string& key) const {
  for (const auto& p : params_)
    if (p.key == key) return p;
  throw ConfigError("unknown key '" + key + "'");
}

Param& Config::find(const std::string& key) {
  for (auto& p : params_)
    if (p.key == key) return p;
  throw ConfigError("unknown key '" + key + "'");
}

double Config::real(const std::string& key) const { return std::strtod(find(key).value.c_str(), nullptr); }

int Config::integer(const std::string& key) const {
  const Param& p = find(key);
  if (p.type != ValueType::Integer) throw std::logic_error("key is not an integer: " + key);
  return static_cast<int>(std::strtol(p.value.c_str(), nullptr, 10));
}

unsigned long Config::seed() const {
  const long v = integer("seed");
  if (v < 0) throw ConfigError("seed must be non-negative");
  return static_cast<unsigned long>(v);
}

std::string Config::text(const std::string& key) const { return find(key).value; }

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace warplab::cli
