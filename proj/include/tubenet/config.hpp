#pragma once

// TOML subset: [section] headers, key = value with numbers, booleans,
// "strings" and flat [arrays]; '#' starts a comment. Keys are addressed as
// "section.key".

#include <map>
#include <set>
#include <string>
#include <vector>

namespace tubenet {

struct ConfigValue {
  enum class Kind { Number, Boolean, String, Array };
  Kind kind = Kind::Number;
  double number = 0.0;
  bool boolean = false;
  std::string text;
  std::vector<ConfigValue> items;
};

class Config {
public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::vector<std::string> keys() const;

  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  /// Scalars are accepted as one-element lists.
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> strings(const std::string& key, const std::vector<std::string>& fallback) const;

  /// Replaces or adds a value given in config syntax, e.g. set("coupling.lvlmax", "2").
  void set(const std::string& key, const std::string& value_text);
  /// Throws Error(Parse) naming the first key outside `allowed`.
  void require_known(const std::set<std::string>& allowed) const;

private:
  std::map<std::string, ConfigValue> values_;
};

}  // namespace tubenet
