#include "tubenet/config.hpp"

#include "tubenet/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tubenet {

namespace {

class ValueParser {
public:
  ValueParser(const std::string& text, int line) : s_(text), line_(line) {}

  ConfigValue parse_all() {
    ConfigValue v = value();
    skip_space();
    if (pos_ != s_.size()) error("trailing characters after value");
    return v;
  }

private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::Parse, "config line " + std::to_string(line_) + ": " + what);
  }
  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  ConfigValue value() {
    skip_space();
    if (pos_ >= s_.size()) error("missing value");
    const char c = s_[pos_];
    if (c == '"') return quoted();
    if (c == '[') return array();
    return bare();
  }

  ConfigValue quoted() {
    ConfigValue v;
    v.kind = ConfigValue::Kind::String;
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      v.text += s_[pos_++];
    }
    if (pos_ >= s_.size()) error("unterminated string");
    ++pos_;
    return v;
  }

  ConfigValue array() {
    ConfigValue v;
    v.kind = ConfigValue::Kind::Array;
    ++pos_;
    skip_space();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      v.items.push_back(value());
      if (v.items.back().kind == ConfigValue::Kind::Array) error("nested arrays are not supported");
      skip_space();
      if (pos_ >= s_.size()) error("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == ']') {
          ++pos_;
          return v;
        }
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      error("expected ',' or ']' in array");
    }
  }

  ConfigValue bare() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && !std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    const std::string tok = s_.substr(start, pos_ - start);
    ConfigValue v;
    if (tok == "true" || tok == "false") {
      v.kind = ConfigValue::Kind::Boolean;
      v.boolean = tok == "true";
      return v;
    }
    std::string digits;
    for (char ch : tok)
      if (ch != '_') digits += ch;
    double d = 0.0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
    if (ec != std::errc() || end != digits.data() + digits.size() || digits.empty() || !std::isfinite(d))
      error("invalid value '" + tok + "'");
    v.kind = ConfigValue::Kind::Number;
    v.number = d;
    return v;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_;
};

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

const char* kind_name(ConfigValue::Kind k) {
  switch (k) {
    case ConfigValue::Kind::Number: return "number";
    case ConfigValue::Kind::Boolean: return "boolean";
    case ConfigValue::Kind::String: return "string";
    case ConfigValue::Kind::Array: return "array";
  }
  return "?";
}

[[noreturn]] void type_error(const std::string& key, const char* expected, ConfigValue::Kind got) {
  fail(ErrorCode::Parse, "config key '" + key + "' must be a " + expected + ", found " + kind_name(got));
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string raw, section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": malformed section");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_name(section))
        fail(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": invalid section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": expected key = value");
    const std::string name = trim(line.substr(0, eq));
    if (!valid_name(name)) fail(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": invalid key");
    const std::string key = section.empty() ? name : section + "." + name;
    if (cfg.values_.count(key)) fail(ErrorCode::Parse, "config line " + std::to_string(line_no) + ": duplicate key " + key);
    const std::string value_text = trim(line.substr(eq + 1));
    cfg.values_[key] = ValueParser(value_text, line_no).parse_all();
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::vector<std::string> Config::keys() const {
  std::vector<std::string> k;
  for (const auto& [key, v] : values_) k.push_back(key);
  return k;
}

double Config::number(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second.kind != ConfigValue::Kind::Number) type_error(key, "number", it->second.kind);
  return it->second.number;
}

int Config::integer(const std::string& key, int fallback) const {
  const double v = number(key, fallback);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(ErrorCode::Parse, "config key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

bool Config::boolean(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second.kind != ConfigValue::Kind::Boolean) type_error(key, "boolean", it->second.kind);
  return it->second.boolean;
}

std::string Config::string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second.kind != ConfigValue::Kind::String) type_error(key, "string", it->second.kind);
  return it->second.text;
}

std::vector<double> Config::numbers(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second.kind == ConfigValue::Kind::Number) return {it->second.number};
  if (it->second.kind != ConfigValue::Kind::Array) type_error(key, "number array", it->second.kind);
  std::vector<double> out;
  for (const auto& v : it->second.items) {
    if (v.kind != ConfigValue::Kind::Number) type_error(key, "number array", v.kind);
    out.push_back(v.number);
  }
  return out;
}

std::vector<std::string> Config::strings(const std::string& key, const std::vector<std::string>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second.kind == ConfigValue::Kind::String) return {it->second.text};
  if (it->second.kind != ConfigValue::Kind::Array) type_error(key, "string array", it->second.kind);
  std::vector<std::string> out;
  for (const auto& v : it->second.items) {
    if (v.kind != ConfigValue::Kind::String) type_error(key, "string array", v.kind);
    out.push_back(v.text);
  }
  return out;
}

void Config::set(const std::string& key, const std::string& value_text) {
  const auto dot = key.find('.');
  require(valid_name(dot == std::string::npos ? key : key.substr(dot + 1)) &&
              (dot == std::string::npos || valid_name(key.substr(0, dot))),
          "invalid config key '" + key + "'");
  values_[key] = ValueParser(value_text, 0).parse_all();
}

void Config::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, v] : values_)
    if (!allowed.count(key)) fail(ErrorCode::Parse, "unknown config key '" + key + "'");
}

}  // namespace tubenet
