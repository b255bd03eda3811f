#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace opshare::tools {

struct MonteCarloRate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Brute-force E[log(1 + SIR)] (nats, noise dropped) for a UE at distance
/// r_ff from its SBS transmitting at own_power_w. Interferers form a PPP of
/// intensity lambda_l on a disc of radius `radius` centred at the UE and draw
/// their powers uniformly from `interferer_powers` (repeat entries to weight
/// them). Power gains are Rayleigh, pathloss d^-alpha.
MonteCarloRate monte_carlo_rate(double lambda_l, double own_power_w, std::span<const double> interferer_powers,
                                double r_ff, double alpha, std::size_t realizations, std::uint64_t seed,
                                double radius = 3000.0);

}  // namespace opshare::tools
