#include "opshare/network_config.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "opshare/errors.hpp"

namespace opshare {

double LearningRate::at(std::size_t prior_visits) const {
  if (kind == Kind::harmonic) return 1.0 / (1.0 + static_cast<double>(prior_visits));
  return value;
}

double NetworkConfig::power_step() const {
  if (power_levels <= 1) return max_power_w;
  return max_power_w / static_cast<double>(power_levels - 1);
}

double NetworkConfig::power_level(std::size_t n) const {
  if (power_levels <= 1) return max_power_w;
  if (n + 1 == power_levels) return max_power_w;
  return static_cast<double>(n) * power_step();
}

std::vector<double> NetworkConfig::power_grid() const {
  std::vector<double> grid(power_levels);
  for (std::size_t n = 0; n < power_levels; ++n) grid[n] = power_level(n);
  return grid;
}

double NetworkConfig::operator_weight(std::size_t k) const {
  return operator_weights.empty() ? 1.0 : operator_weights.at(k);
}

double NetworkConfig::expected_sbs_per_operator() const {
  return sbs_intensity * std::numbers::pi * area_radius_m * area_radius_m;
}

std::size_t NetworkConfig::total_demand() const {
  return std::accumulate(demand.begin(), demand.end(), std::size_t{0});
}

std::size_t NetworkConfig::total_supply() const {
  return std::accumulate(supply.begin(), supply.end(), std::size_t{0});
}

std::size_t NetworkConfig::max_supply() const {
  return supply.empty() ? 0 : *std::max_element(supply.begin(), supply.end());
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid configuration: " + what);
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void NetworkConfig::validate() const {
  require(num_operators >= 1, "K must be at least 1");
  require(num_rbs >= 1, "L must be at least 1");
  require(demand.size() == num_operators, "demand vector c must have K entries");
  require(supply.size() == num_rbs, "supply vector b must have L entries");
  for (std::size_t k = 0; k < demand.size(); ++k) {
    require(demand[k] >= 1, "c[" + std::to_string(k) + "] must be at least 1");
    require(demand[k] <= num_rbs, "c[" + std::to_string(k) + "] must not exceed L");
  }
  for (std::size_t l = 0; l < supply.size(); ++l)
    require(supply[l] >= 1, "b[" + std::to_string(l) + "] must be at least 1");
  require(total_demand() <= total_supply(), "total demand sum(c) must not exceed total supply sum(b)");
  require(operator_weights.empty() || operator_weights.size() == num_operators,
          "operator weights rho_op must be empty or have K entries");
  for (double w : operator_weights) require(positive(w), "operator weights rho_op must be positive");
  require(positive(sbs_weight), "SBS weight rho_sbs must be positive");
  require(std::isfinite(sbs_intensity) && sbs_intensity >= 0.0, "lambda must be nonnegative");
  require(positive(area_radius_m), "area_radius must be positive");
  require(positive(ue_radius_m), "r_c must be positive");
  require(positive(pathloss_exponent), "alpha must be positive");
  require(positive(fading_rate), "eta must be positive");
  require(positive(noise_power_w), "sigma2 must be positive");
  require(positive(max_power_w), "p_tot must be positive");
  require(power_levels >= 1, "N_levels must be at least 1");
  require(positive(sinr_threshold), "sinr_th must be positive");
  require(positive(acceptance_sharpness), "T_b must be positive");
  require(learning.epsilon >= 0.0 && learning.epsilon <= 1.0, "epsilon must lie in [0, 1]");
  require(learning.discount >= 0.0 && learning.discount <= 1.0, "gamma must lie in [0, 1]");
  require(!learning.boltzmann_temperature || positive(*learning.boltzmann_temperature),
          "T_p must be positive");
  require(learning.rate.kind == LearningRate::Kind::harmonic ||
              (learning.rate.value >= 0.0 && learning.rate.value <= 1.0),
          "beta must lie in [0, 1]");
  require(positive(pathloss.min_distance_m), "minimum link distance must be positive");
  require(std::isfinite(shadowing_std_db) && shadowing_std_db >= 0.0, "shadow_sigma_db must be nonnegative");
}

NetworkConfig make_network(std::size_t num_operators, std::size_t num_rbs,
                           std::vector<std::size_t> demand, std::size_t supply_per_rb) {
  NetworkConfig cfg;
  cfg.num_operators = num_operators;
  cfg.num_rbs = num_rbs;
  cfg.demand = std::move(demand);
  cfg.supply.assign(num_rbs, supply_per_rb);
  return cfg;
}

}  // namespace opshare
