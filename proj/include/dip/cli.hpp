#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dip/evaluation.hpp"
#include "dip/pipeline.hpp"
#include "dip/simulator.hpp"

namespace dip {

// Everything tunable from a config file or a flag of the same name.
struct CliConfig {
  SessionConfig session;
  SimConfig sim;
  EvalOptions eval;

  // Throws InvalidArgument naming the first offending key.
  void validate() const;
};

struct ConfigKey {
  const char* name;
  const char* help;
};

const std::vector<ConfigKey>& config_keys();

// Throws ParseError for unknown keys or malformed values.
void apply_config_value(CliConfig& cfg, const std::string& key, const std::string& value);

// defaults < file < overrides, then validate().
CliConfig resolve_config(const std::optional<std::filesystem::path>& file,
                         const std::vector<std::pair<std::string, std::string>>& overrides);

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitNoResult = 1;
inline constexpr int kExitInputError = 2;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dip
