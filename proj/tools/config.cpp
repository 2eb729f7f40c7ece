#include "config.hpp"

#include <fstream>

#include "util.hpp"

namespace cli {

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw CliError("cannot open config file '" + path + "'");
  }
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) {
      line.resize(hash);
    }
    const std::string trimmed = trim(line);
    if (trimmed.empty()) {
      continue;
    }
    const size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw CliError(path + ":" + std::to_string(line_number) +
                     ": expected key=value");
    }
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty()) {
      throw CliError(path + ":" + std::to_string(line_number) + ": empty key");
    }
    values_[key] = value;
  }
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

void Config::set_pair(const std::string& pair) {
  const size_t eq = pair.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw CliError("--set expects key=value, got '" + pair + "'");
  }
  set(trim(pair.substr(0, eq)), trim(pair.substr(eq + 1)));
}

bool Config::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string Config::get(const std::string& key,
                        const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

int64_t Config::get_int(const std::string& key, int64_t fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_int(it->second, key);
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(it->second, key);
}

std::string Config::require(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw CliError("missing required setting '" + key + "'");
  }
  return it->second;
}

int64_t Config::require_int(const std::string& key) const {
  return parse_int(require(key), key);
}

double Config::require_double(const std::string& key) const {
  return parse_double(require(key), key);
}

}  // namespace cli
