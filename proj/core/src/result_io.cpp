#include "opshare/result_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace opshare {

namespace {

constexpr const char* kHeader = "experiment_id,seed,K,L,power_mode,algorithm,welfare";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  return fields;
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RateUnit unit_from(const std::string& s) { return parse_rate_unit(s.c_str()); }

}  // namespace

void write_csv(std::ostream& out, const std::vector<ResultSet>& sets) {
  out << kHeader << '\n';
  for (const auto& set : sets)
    for (std::size_t i = 0; i < set.samples.size(); ++i)
      out << csv_field(set.experiment_id) << ',' << set.seeds[i] << ',' << set.num_operators << ',' << set.num_rbs
          << ',' << to_string(set.power_mode) << ',' << to_string(set.algorithm) << ',' << g17(set.samples[i])
          << '\n';
}

nlohmann::json sidecar_json(const std::vector<ResultSet>& sets) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& set : sets) {
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& f : set.failures) failures.push_back({{"seed", f.seed}, {"message", f.message}});
    std::vector<double> sorted = set.samples;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> probs;
    for (std::size_t i = 0; i < sorted.size(); ++i)
      probs.push_back(static_cast<double>(i + 1) / static_cast<double>(sorted.size()));
    nlohmann::json quantiles;
    for (double p : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95}) quantiles[g17(p)] = set.quantile(p);
    arr.push_back({
        {"experiment_id", set.experiment_id},
        {"K", set.num_operators},
        {"L", set.num_rbs},
        {"power_mode", to_string(set.power_mode)},
        {"algorithm", to_string(set.algorithm)},
        {"unit", to_string(set.unit)},
        {"config_hash", set.config_hash},
        {"seeds", set.seeds},
        {"wall_time_s", set.wall_time_s},
        {"per_operator_mean", set.per_operator_mean},
        {"inter_operator_pairs", set.inter_operator_pairs},
        {"failures", failures},
        {"traces", set.traces},
        {"mean", set.mean()},
        {"median", set.median()},
        {"standard_error", set.standard_error()},
        {"per_op_average", set.per_op_average()},
        {"quantiles", quantiles},
        {"cdf", {{"x", sorted}, {"p", probs}}},
    });
  }
  return {{"results", arr}};
}

std::vector<ResultSet> read_results(std::istream& csv, const nlohmann::json& sidecar) {
  std::vector<ResultSet> sets;
  for (const auto& j : sidecar.at("results")) {
    ResultSet set;
    set.experiment_id = j.at("experiment_id").get<std::string>();
    set.num_operators = j.at("K").get<std::size_t>();
    set.num_rbs = j.at("L").get<std::size_t>();
    set.power_mode = parse_power_mode(j.at("power_mode").get<std::string>());
    set.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    set.unit = unit_from(j.at("unit").get<std::string>());
    set.config_hash = j.at("config_hash").get<std::uint64_t>();
    set.wall_time_s = j.at("wall_time_s").get<double>();
    set.per_operator_mean = j.at("per_operator_mean").get<std::vector<double>>();
    set.inter_operator_pairs = j.at("inter_operator_pairs").get<std::vector<std::size_t>>();
    for (const auto& f : j.at("failures"))
      set.failures.push_back({f.at("seed").get<std::uint64_t>(), f.at("message").get<std::string>()});
    set.traces = j.at("traces").get<std::vector<std::vector<double>>>();
    sets.push_back(std::move(set));
  }

  std::string line;
  if (!std::getline(csv, line) || line != kHeader) throw std::runtime_error("CSV header mismatch");
  std::size_t current = 0;
  std::size_t row = 1;
  while (std::getline(csv, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) throw std::runtime_error("CSV row " + std::to_string(row) + " does not have 7 fields");
    while (current < sets.size() && sets[current].experiment_id != f[0]) ++current;
    if (current == sets.size())
      throw std::runtime_error("CSV row " + std::to_string(row) + " names unknown experiment '" + f[0] + "'");
    auto& set = sets[current];
    if (std::stoull(f[2]) != set.num_operators || std::stoull(f[3]) != set.num_rbs ||
        f[4] != to_string(set.power_mode) || f[5] != to_string(set.algorithm))
      throw std::runtime_error("CSV row " + std::to_string(row) + " disagrees with the sidecar");
    set.seeds.push_back(std::stoull(f[1]));
    set.samples.push_back(std::stod(f[6]));
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& j = sidecar.at("results")[i];
    if (j.at("seeds").get<std::vector<std::uint64_t>>() != sets[i].seeds)
      throw std::runtime_error("CSV seeds disagree with the sidecar for '" + sets[i].experiment_id + "'");
  }
  return sets;
}

ResultPaths write_results(const std::filesystem::path& dir, const std::string& stem,
                          const std::vector<ResultSet>& sets) {
  std::filesystem::create_directories(dir);
  ResultPaths paths{dir / (stem + ".csv"), dir / (stem + ".json")};
  std::ofstream csv(paths.csv, std::ios::binary);
  write_csv(csv, sets);
  std::ofstream json(paths.sidecar, std::ios::binary);
  json << sidecar_json(sets).dump(2) << '\n';
  if (!csv || !json) throw std::runtime_error("failed to write results under " + dir.string());
  return paths;
}

std::vector<ResultSet> load_results(const ResultPaths& paths) {
  std::ifstream csv(paths.csv, std::ios::binary);
  std::ifstream json(paths.sidecar, std::ios::binary);
  if (!csv || !json) throw std::runtime_error("cannot open result files");
  return read_results(csv, nlohmann::json::parse(json));
}

}  // namespace opshare
