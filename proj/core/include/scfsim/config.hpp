#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace scfsim {

// Invalid or missing configuration; messages always name the offending
// field.  The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat `key = value` text with `[section]` headers; keys are addressed
// as "section.key".  Lines starting with '#' (or blank) are ignored;
// a trailing "# comment" is stripped from values.  Later duplicates of
// a key override earlier ones.
class KeyValueConfig {
 public:
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::uint32_t get_u32(const std::string& key, std::uint32_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Comma-separated list of numbers, or "start:step:stop" (inclusive).
  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& fallback) const;

  // Sorted "key=value" lines; the canonical form hashed into CSV metadata.
  std::string canonical() const;

  void set(const std::string& key, const std::string& value);

 private:
  std::map<std::string, std::string> values_;
};

// Stable 64-bit digest of a canonical spec string.
std::uint64_t spec_digest(const std::string& canonical_text);

}  // namespace scfsim
