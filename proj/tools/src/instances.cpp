#include "opshare/tools/instances.hpp"

#include <numeric>

namespace opshare::tools {

Instance random_instance(std::mt19937_64& rng, const InstanceLimits& limits) {
  std::uniform_int_distribution<std::size_t> k_draw(1, limits.max_operators);
  std::uniform_int_distribution<std::size_t> l_draw(1, limits.max_rbs);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const std::size_t k = k_draw(rng);
    const std::size_t l = l_draw(rng);
    std::uniform_int_distribution<std::size_t> c_draw(1, std::min(limits.max_demand, l));
    std::uniform_int_distribution<std::size_t> b_draw(1, limits.max_supply);
    std::vector<std::size_t> demand(k);
    std::vector<std::size_t> supply(l);
    for (auto& c : demand) c = c_draw(rng);
    for (auto& b : supply) b = b_draw(rng);
    if (std::accumulate(demand.begin(), demand.end(), std::size_t{0}) >
        std::accumulate(supply.begin(), supply.end(), std::size_t{0}))
      continue;

    const std::size_t max_occ = *std::max_element(supply.begin(), supply.end());
    std::vector<std::vector<double>> rates(k, std::vector<double>(max_occ));
    std::vector<double> weights(k, 1.0);
    for (std::size_t p = 0; p < k; ++p) {
      double r = 5.0 + 5.0 * unit(rng);
      for (auto& x : rates[p]) {
        x = r;
        r *= 0.6 + 0.35 * unit(rng);
      }
      if (limits.random_weights) weights[p] = 0.5 + 1.5 * unit(rng);
    }
    auto ops = build_augmented(demand);
    auto table = RateTable::from_child_rates(std::move(rates), std::move(weights), demand);
    return {std::move(demand), std::move(supply), std::move(ops), std::move(table)};
  }
}

}  // namespace opshare::tools
