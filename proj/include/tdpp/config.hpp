#pragma once

#include "tdpp/sim.hpp"

#include <string>

namespace tdpp {

// Flat "key = value" experiment configs; '#' starts a comment and lists are
// comma separated. Unknown keys are errors that name the key.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Applies one key=value pair (also used for command-line overrides).
void apply_config_value(ExperimentConfig& config, const std::string& key,
                        const std::string& value);

std::string config_to_text(const ExperimentConfig& config);

} // namespace tdpp
