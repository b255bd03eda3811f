#pragma once

#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

#include "opshare/units.hpp"

namespace opshare {

/// Empirical link model: dB pathloss for the direct (serving) link and the
/// cross link through a wall, plus log-normal shadowing.
struct PathlossModel {
  double direct_intercept_db = 37.0;
  double direct_slope_db = 20.0;
  double cross_intercept_db = 7.0;
  double cross_slope_db = 56.0;
  double wall_loss_db = 15.0;
  /// Distances below this are clamped before taking log10.
  double min_distance_m = 1.0;
};

struct LearningRate {
  enum class Kind { constant, harmonic };
  Kind kind = Kind::constant;
  double value = 0.5;

  /// Rate used for an update of a state-action pair that has been updated
  /// `prior_visits` times before. Harmonic: 1 / (1 + prior_visits).
  double at(std::size_t prior_visits) const;
};

enum class MaxOperator {
  all_actions,    // max over every a'
  exclude_taken,  // max over a' != a, as printed in the update rule
};

enum class PmfEstimate {
  empirical_window,  // action frequencies over the trailing window
  exact_policy,      // the exploration policy's distribution at the final Q
};

struct QLearningParams {
  double discount = 0.95;
  double epsilon = 0.1;
  /// When set, actions are drawn from a Boltzmann distribution instead of epsilon-greedy.
  std::optional<double> boltzmann_temperature;
  LearningRate rate{};
  MaxOperator max_operator = MaxOperator::all_actions;
  PmfEstimate pmf_estimate = PmfEstimate::empirical_window;
  /// Trailing window for the empirical pmf; 0 means the trailing half of the run.
  std::size_t pmf_window = 0;
};

/// Every scalar model parameter of the multi-operator small-cell network.
struct NetworkConfig {
  std::size_t num_operators = 1;  // K
  std::size_t num_rbs = 1;        // L

  /// SBS intensity per operator, SBS per square meter.
  double sbs_intensity = 8.0 / (std::numbers::pi * 500.0 * 500.0);
  double area_radius_m = 500.0;
  /// UEs are placed uniformly on a disc of this radius around their SBS.
  double ue_radius_m = 20.0;
  double pathloss_exponent = 4.0;
  /// Rayleigh fading: power gains are exponential with this rate.
  double fading_rate = 1.0;
  double noise_power_w = dbm_to_watts(-120.0);
  double max_power_w = dbm_to_watts(10.0);
  std::size_t power_levels = 5;
  double sinr_threshold = db_to_linear(3.0);

  std::vector<std::size_t> demand;  // c_k, RBs wanted by each operator
  std::vector<std::size_t> supply;  // b_l, operators allowed per RB
  /// rho_k; empty means all ones.
  std::vector<double> operator_weights;
  double sbs_weight = 1.0;  // rho_f

  /// MCMC acceptance sharpness T_b in 1 / (1 + exp(-T_b * dS)).
  double acceptance_sharpness = 100.0;
  QLearningParams learning{};

  PathlossModel pathloss{};
  double shadowing_std_db = 4.0;

  /// Spacing between power levels. Levels are {0, step, ..., max_power}; a
  /// single level means the SBS always transmits at max_power.
  double power_step() const;
  double power_level(std::size_t n) const;
  std::vector<double> power_grid() const;

  double operator_weight(std::size_t k) const;
  /// Mean SBS count per operator over the deployment disc.
  double expected_sbs_per_operator() const;
  std::size_t total_demand() const;
  std::size_t total_supply() const;
  std::size_t max_supply() const;

  /// Throws ConfigError naming the first violated invariant.
  void validate() const;
};

/// Defaults from the reference scenario with K operators, L RBs, demand c
/// and per-RB supply b.
NetworkConfig make_network(std::size_t num_operators, std::size_t num_rbs,
                           std::vector<std::size_t> demand, std::size_t supply_per_rb);

}  // namespace opshare
