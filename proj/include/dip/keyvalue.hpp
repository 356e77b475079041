#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dip {

// Plain-text `key = value` lines; '#' starts a comment, blank lines are
// ignored. Duplicate keys: last one wins.
struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

std::vector<KeyValue> parse_key_values(std::istream& in);
std::vector<KeyValue> load_key_values(const std::filesystem::path& path);

// Strict scalar conversions; throw ParseError naming the key.
double kv_double(const std::string& key, const std::string& value);
std::int64_t kv_int(const std::string& key, const std::string& value);
bool kv_bool(const std::string& key, const std::string& value);

}  // namespace dip
