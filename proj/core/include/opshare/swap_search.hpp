#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "opshare/analytic_rate.hpp"
#include "opshare/matching.hpp"

namespace opshare {

/// Every child is placed uniformly at random among the RBs that still have a
/// vacancy. Sibling collisions are allowed. Throws ConstraintError when the
/// children do not fit.
Matching random_initial_matching(const AugmentedOpSet& ops, std::vector<std::size_t> supply, std::mt19937_64& rng);

/// Pick two distinct RBs uniformly, then on each one an occupant or, if the
/// RB has spare capacity, a HOLE, uniformly. Returns nullopt when both picks
/// are holes or there are fewer than two RBs.
std::optional<SwapMove> sample_swap(const Matching& m, std::mt19937_64& rng);

/// Logistic acceptance 1 / (1 + exp(-sharpness * delta)), evaluated without overflow.
double acceptance_probability(double delta, double sharpness);

enum class SearchAlgorithm { greedy, mcmc };

const char* to_string(SearchAlgorithm algorithm);

struct SearchOptions {
  SearchAlgorithm algorithm = SearchAlgorithm::mcmc;
  std::size_t max_iterations = 500;
  std::uint64_t seed = 0;
  /// T_b: larger values make the logistic acceptance sharper (greedier).
  double sharpness = 100.0;
  /// Greedy only: after this many consecutive rejected samples, scan every
  /// swap; stop if none improves.
  std::size_t patience = 64;
  /// Mutation-testing hook: negates the exponent of the logistic acceptance.
  bool flip_acceptance_sign = false;
};

/// Swap search on the potential. Greedy applies a sampled swap iff it raises
/// the potential; MCMC accepts with the logistic probability and otherwise
/// still accepts strict improvements. The best matching seen is tracked.
class SwapSearch {
 public:
  SwapSearch(Matching initial, const RateTable& rates, SearchOptions opts);

  /// One iteration. Returns true if the current matching changed.
  bool step(const RateTable& rates);

  /// Re-evaluate current and best under a new rate table (after the power
  /// pmfs changed); the best is replaced if the current now scores higher.
  void rescore(const RateTable& rates);

  const Matching& current() const { return current_; }
  const Matching& best() const { return best_; }
  double current_value() const { return current_value_; }
  double best_value() const { return best_value_; }
  std::size_t accepted() const { return accepted_; }
  /// Greedy only: an exhaustive scan found no improving swap.
  bool at_fixed_point() const { return fixed_point_; }

 private:
  bool improving(double delta) const;
  bool greedy_step(const RateTable& rates);
  bool mcmc_step(const RateTable& rates);
  void accept(const SwapMove& move, double delta);

  SearchOptions opts_;
  std::mt19937_64 rng_;
  Matching current_;
  Matching best_;
  double current_value_ = 0.0;
  double best_value_ = 0.0;
  std::size_t accepted_ = 0;
  std::size_t rejections_in_a_row_ = 0;
  bool fixed_point_ = false;
};

struct SearchResult {
  Matching best;
  Matching current;
  /// Potential of the current matching after each iteration.
  std::vector<double> trace;
  /// Best potential seen after each iteration.
  std::vector<double> best_trace;
  std::size_t accepted = 0;
  bool reached_fixed_point = false;
};

/// Runs max_iterations steps. Greedy stops early at a fixed point; its traces
/// are then padded with the final value to the full length.
SearchResult run_search(const Matching& initial, const RateTable& rates, const SearchOptions& opts);

SearchResult greedy_swap(const Matching& initial, const RateTable& rates, std::size_t max_iterations,
                         std::uint64_t seed);
SearchResult mcmc_swap(const Matching& initial, const RateTable& rates, std::size_t max_iterations,
                       std::uint64_t seed, double sharpness);

}  // namespace opshare
