#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "radchem/model.hpp"

namespace radchem
{

/*!
 * Flat key/value view of a run configuration. Keys are the dotted names
 * accepted in config files (`n`, `R`, `alpha`, `initial.kind`, `lp`, ...);
 * values keep their source text so overrides can be layered before the
 * final conversion.
 */
using ConfigEntries = std::map<std::string, std::string>;

/// Parse a flat YAML mapping. Nested maps are rejected; sequences are kept
/// as their comma-joined scalars.
ConfigEntries parse_entries(std::string const& text);

/// Convert entries to a validated RunConfig. Unknown keys, missing
/// required keys and malformed values throw ConfigError naming the key.
RunConfig config_from_entries(ConfigEntries const& entries);

RunConfig load_config(std::filesystem::path const& path);
RunConfig parse_config(std::string const& text);

/// Inverse of config_from_entries (round-trips through parse_config).
ConfigEntries config_to_entries(RunConfig const& config);
std::string format_config(RunConfig const& config);

}  // namespace radchem
