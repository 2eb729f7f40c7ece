#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace cli {

// Plain-text key=value settings with '#' comments. Precedence is handled by
// apply order: defaults < file < command-line overrides.
class Config {
 public:
  Config() = default;

  void load_file(const std::string& path);
  void set(const std::string& key, const std::string& value);
  // "key=value" form used by --set.
  void set_pair(const std::string& pair);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  int64_t get_int(const std::string& key, int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::string require(const std::string& key) const;
  int64_t require_int(const std::string& key) const;
  double require_double(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace cli
