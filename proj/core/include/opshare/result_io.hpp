#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "opshare/harness.hpp"

namespace opshare {

/// One row per steady-state sample:
/// experiment_id,seed,K,L,power_mode,algorithm,welfare. Values are printed with
/// 17 significant digits so the text is reproducible and parses back exactly.
void write_csv(std::ostream& out, const std::vector<ResultSet>& sets);

/// Everything in the sets that the CSV does not carry, plus derived quantiles
/// and the empirical CDF for plotting.
nlohmann::json sidecar_json(const std::vector<ResultSet>& sets);

/// Inverse of write_csv + sidecar_json. Throws std::runtime_error on malformed
/// input or when the two files disagree.
std::vector<ResultSet> read_results(std::istream& csv, const nlohmann::json& sidecar);

struct ResultPaths {
  std::filesystem::path csv;
  std::filesystem::path sidecar;
};

/// Writes <dir>/<stem>.csv and <dir>/<stem>.json, creating dir if needed.
ResultPaths write_results(const std::filesystem::path& dir, const std::string& stem,
                          const std::vector<ResultSet>& sets);
std::vector<ResultSet> load_results(const ResultPaths& paths);

}  // namespace opshare
