#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace warplab::cli {

// Bad key, bad value or unreadable file. Maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueType { Real, Integer, Text };

struct Param {
  std::string key;
  ValueType type = ValueType::Real;
  std::string value;
  std::string doc;
  std::string source = "default";
};

// Flat key = value configuration. Keys must be declared before they can be
// set; later sources override earlier ones (defaults, then file, then CLI).
class Config {
 public:
  void declare(const std::string& key, ValueType type, const std::string& value, const std::string& doc);
  void set(const std::string& key, const std::string& value, const std::string& source);
  void load_file(const std::string& path);
  // "key=value" strings.
  void apply_overrides(const std::vector<std::string>& assignments);

  bool has(const std::string& key) const;
  double real(const std::string& key) const;
  int integer(const std::string& key) const;
  unsigned long seed() const;
  std::string text(const std::string& key) const;
  const std::vector<Param>& params() const { return params_; }

 private:
  const Param& find(const std::string& key) const;
  Param& find(const std::string& key);
  std::vector<Param> params_;
};

// Canonical text of a real value, used when a sweep writes a value back.
std::string format_value(double v);

}  // namespace warplab::cli
