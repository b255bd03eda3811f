#pragma once

#include <filesystem>
#include <string>

#include "opshare/harness.hpp"
#include "opshare/units.hpp"

namespace opshare::tools {

/// A parsed configuration file: the experiment plus output preferences.
struct RunConfig {
  ExperimentSpec spec;
  RateUnit unit = RateUnit::bits;
};

/// Parses flat `key = value` text. Blank lines and `#` comments are ignored;
/// lists are space- or comma-separated, demand grids separate vectors with
/// `;`. network.K, network.L and network.c are required. Throws ConfigError
/// whose message carries `source:line` and the offending key.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace opshare::tools
