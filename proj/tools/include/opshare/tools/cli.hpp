#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "opshare/units.hpp"

namespace opshare::tools {

/// Process exit codes of the opshare tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,      // runtime error, or a failed verification property
  kExitConfigError = 2,  // unreadable or invalid configuration, bad usage
  kExitTooLarge = 3,     // enumerate: more matchings than the limit
};

/// Environment variable naming the default output directory of `run`.
inline constexpr const char* kOutputDirEnv = "OPSHARE_OUTPUT_DIR";

struct RunOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<RateUnit> unit;
};

struct VerifyCliOptions {
  std::optional<std::string> only;
  bool flip_acceptance = false;
  std::optional<std::uint64_t> seed;
};

struct EnumerateOptions {
  std::filesystem::path config;
  std::optional<RateUnit> unit;
  double limit = 1e6;
};

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyCliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_enumerate(const EnumerateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_rate_table(const std::filesystem::path& config, std::optional<RateUnit> unit, std::ostream& out,
                   std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run_cli(int argc, char** argv);

/// File stem used for an experiment id: characters outside [A-Za-z0-9_-] become '_'.
std::string output_stem(const std::string& experiment_id);

}  // namespace opshare::tools
