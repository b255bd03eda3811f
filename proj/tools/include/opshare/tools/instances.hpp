#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "opshare/analytic_rate.hpp"
#include "opshare/matching.hpp"

namespace opshare::tools {

struct InstanceLimits {
  std::size_t max_operators = 3;
  std::size_t max_rbs = 4;
  std::size_t max_demand = 2;
  std::size_t max_supply = 2;
  /// Draw operator weights in [0.5, 2] instead of all ones.
  bool random_weights = true;
};

/// A small matching game: demand, supply and a synthetic rate table whose
/// child rates are positive and strictly decreasing in RB occupancy.
struct Instance {
  std::vector<std::size_t> demand;
  std::vector<std::size_t> supply;
  AugmentedOpSet ops;
  RateTable rates;
};

/// Draws K, L, c, b uniformly within the limits until sum(c) <= sum(b).
Instance random_instance(std::mt19937_64& rng, const InstanceLimits& limits = {});

}  // namespace opshare::tools
