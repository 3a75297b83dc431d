#pragma once

#include <string>

#include "fthss/pipeline.hpp"

namespace fthss {

/// Parse a key-value config ('#' comments, one "key = value" per line).
/// Unknown keys are rejected with a line diagnostic. Overrides are applied
/// afterwards as "key=value" strings.
SimulationConfig parse_config_text(const std::string& text);
SimulationConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});
void apply_override(SimulationConfig& cfg, const std::string& key, const std::string& value);

/// Canonical text form; parse(to_config_text(cfg)) reproduces cfg exactly.
std::string to_config_text(const SimulationConfig& cfg);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace fthss
