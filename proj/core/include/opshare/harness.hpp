#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opshare/analytic_rate.hpp"
#include "opshare/deployment.hpp"
#include "opshare/matching.hpp"
#include "opshare/network_config.hpp"
#include "opshare/power_pmf.hpp"
#include "opshare/swap_search.hpp"
#include "opshare/units.hpp"

namespace opshare {

enum class ExperimentKind { convergence_trace, welfare_cdf, welfare_vs_L, demand_sweep, intensity_sweep };
enum class PowerMode { full, uniform, q_learning };

const char* to_string(ExperimentKind kind);
const char* to_string(PowerMode mode);
ExperimentKind parse_experiment_kind(const std::string& text);
PowerMode parse_power_mode(const std::string& text);
SearchAlgorithm parse_algorithm(const std::string& text);

struct ExperimentSpec {
  std::string id = "experiment";
  NetworkConfig network;
  ExperimentKind kind = ExperimentKind::welfare_cdf;
  /// Sweep grids; only the one matching `kind` is used. L and intensity
  /// sweeps require a uniform supply vector, which is resized to each L.
  std::vector<std::size_t> rb_grid;
  std::vector<std::vector<std::size_t>> demand_grid;
  /// Deployment radii; the expected SBS count per operator is held fixed.
  std::vector<double> radius_grid;
  std::size_t trials = 100;
  std::size_t iterations = 500;
  PowerMode power_mode = PowerMode::full;
  SearchAlgorithm algorithm = SearchAlgorithm::mcmc;
  std::uint64_t seed = 1;
  /// Q-learning steps per SBS after each accepted swap.
  std::size_t epoch_steps = 200;
  ChannelMode learning_channel = ChannelMode::empirical;
  /// Worker threads; 0 uses the hardware concurrency.
  std::size_t jobs = 0;
  RateOptions rate{};

  /// Throws ConfigError naming the violated field.
  void validate() const;
};

/// One point of a sweep: the spec with the grid value applied and kind set
/// to welfare_cdf. `index` selects the grid entry.
ExperimentSpec sweep_point(const ExperimentSpec& spec, std::size_t index);
std::size_t sweep_size(const ExperimentSpec& spec);

/// Deterministic text rendering of every field of the spec, used for hashing.
std::string canonical_text(const ExperimentSpec& spec);
std::uint64_t fnv1a_64(const std::string& text);

/// Stateless 64-bit mixer used to derive independent sub-seeds.
std::uint64_t splitmix64(std::uint64_t x);

struct TrialResult {
  std::uint64_t seed = 0;
  /// Potential of the current matching after each iteration.
  std::vector<double> trace;
  std::vector<double> running_average;
  /// Mean of the trailing 10% of `trace`.
  double steady_state = 0.0;
  std::optional<Matching> best;
  double best_value = 0.0;
  /// rho_k R_OPk of the best matching under the final rates.
  std::vector<double> parent_rates;
  std::vector<PowerPmf> parent_pmfs;
  std::size_t inter_operator_pairs = 0;
};

/// Matching game and, in q-learning mode, per-SBS learning epochs after each
/// accepted swap. Deterministic in trial_seed. Throws ConfigError for an
/// infeasible configuration.
TrialResult run_trial(const ExperimentSpec& spec, std::uint64_t trial_seed);

double steady_state(const std::vector<double>& trace);
std::vector<double> running_average(const std::vector<double>& trace);

struct TrialFailure {
  std::uint64_t seed = 0;
  std::string message;
  bool operator==(const TrialFailure&) const = default;
};

struct ResultSet {
  std::string experiment_id;
  std::size_t num_operators = 0;
  std::size_t num_rbs = 0;
  PowerMode power_mode = PowerMode::full;
  SearchAlgorithm algorithm = SearchAlgorithm::mcmc;
  RateUnit unit = RateUnit::nats;
  std::uint64_t config_hash = 0;
  /// Seeds of the successful trials, aligned with samples and traces.
  std::vector<std::uint64_t> seeds;
  std::vector<double> samples;
  std::vector<std::vector<double>> traces;
  /// Mean over trials of rho_k R_OPk per parent.
  std::vector<double> per_operator_mean;
  std::vector<std::size_t> inter_operator_pairs;
  std::vector<TrialFailure> failures;
  double wall_time_s = 0.0;

  double mean() const;
  double median() const;
  double standard_error() const;
  /// Linear-interpolated quantile of the samples, p in [0, 1].
  double quantile(double p) const;
  /// Fraction of samples <= x (right-continuous step function).
  double cdf(double x) const;
  double per_op_average() const { return num_operators == 0 ? 0.0 : mean() / static_cast<double>(num_operators); }

  bool operator==(const ResultSet&) const = default;
};

/// Runs trial seeds seed .. seed + trials - 1 on a thread pool. A failing
/// trial is recorded in `failures` and the rest still run.
ResultSet run_ensemble(const ExperimentSpec& spec);

/// One ResultSet per grid point for sweeps, a single one otherwise.
std::vector<ResultSet> run_experiment(const ExperimentSpec& spec);

/// Converts every welfare quantity of the set to `unit` (sets are produced in nats).
ResultSet convert_units(ResultSet set, RateUnit unit);

struct SaturationCurve {
  std::vector<std::size_t> rbs;
  std::vector<double> per_op;
  /// Smallest grid L from which every successive per-OP value differs by
  /// less than `tolerance` relative.
  std::optional<std::size_t> saturation_rb;
  std::vector<ResultSet> sets;
};

SaturationCurve saturation_curve(const ExperimentSpec& spec, double tolerance = 0.01);
std::optional<std::size_t> saturation_point(const std::vector<std::size_t>& rbs, const std::vector<double>& values,
                                            double tolerance);

}  // namespace opshare
