#pragma once

#include <map>
#include <string>

#include "landau/stepper.hpp"

namespace landau {

// Flat key-value config files: one `key = value` per line, '#' comments.
// Unknown keys are an error (reported with the line number).
std::map<std::string, std::string> parse_key_values(const std::string& text);

RunConfig run_config_from_text(const std::string& text);
RunConfig run_config_from_file(const std::string& path);

// FNV-1a hash of the raw config bytes, hex-encoded (manifest reproducibility)
std::string config_hash(const std::string& text);

} // namespace landau
