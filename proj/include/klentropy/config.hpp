#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace klentropy {

/// Line-oriented `key = value` configuration. `#` starts a comment, blank
/// lines are ignored, list values are comma separated. Keys are case
/// sensitive; a repeated key is an error.
class KeyValueConfig {
public:
  /// Throws UsageError on malformed lines.
  static KeyValueConfig parse(std::istream& in);
  static KeyValueConfig parse_file(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool contains(const std::string& key) const { return values_.count(key) > 0; }

  std::optional<std::string> get(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_real(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_reals(const std::string& key) const;
  std::vector<long long> get_ints(const std::string& key) const;

  /// Keys present in the file that were never read.
  std::vector<std::string> unused_keys() const;

private:
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> read_;
};

std::vector<std::string> split_list(const std::string& value);

}  // namespace klentropy
