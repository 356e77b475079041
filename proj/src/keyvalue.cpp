#include "dip/keyvalue.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "dip/error.hpp"

namespace dip {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<KeyValue> parse_key_values(std::istream& in) {
  std::vector<KeyValue> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line) + ": expected 'key = value'");
    }
    KeyValue kv{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (kv.key.empty()) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": empty key");
    }
    out.push_back(std::move(kv));
  }
  return out;
}

std::vector<KeyValue> load_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return parse_key_values(in);
}

double kv_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (value.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw Error(ErrorCode::kParseError, key + ": not a number '" + value + "'");
  }
  return v;
}

std::int64_t kv_int(const std::string& key, const std::string& value) {
  std::int64_t v = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (value.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kParseError, key + ": not an integer '" + value + "'");
  }
  return v;
}

bool kv_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw Error(ErrorCode::kParseError, key + ": not a boolean '" + value + "'");
}

}  // namespace dip
