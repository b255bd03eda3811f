#include "opshare/power_pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace opshare {

PowerPmf::PowerPmf(std::vector<double> probabilities) : probs_(std::move(probabilities)) {
  if (probs_.empty()) throw std::invalid_argument("power pmf needs at least one level");
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("power pmf entries must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("power pmf must sum to one");
}

PowerPmf PowerPmf::degenerate(std::size_t levels, std::size_t level) {
  if (level >= levels) throw std::out_of_range("degenerate pmf level outside the power grid");
  std::vector<double> p(levels, 0.0);
  p[level] = 1.0;
  return PowerPmf(std::move(p));
}

PowerPmf PowerPmf::uniform(std::size_t levels) {
  if (levels == 0) throw std::invalid_argument("power pmf needs at least one level");
  return from_weights(std::vector<double>(levels, 1.0));
}

PowerPmf PowerPmf::from_weights(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("pmf weights must be nonnegative");
    sum += w;
  }
  if (!(sum > 0.0)) throw std::invalid_argument("pmf weights must have a positive sum");
  for (double& w : weights) w /= sum;
  // Fold the rounding residue into the largest entry so the sum is exact to 1e-12.
  const double residue = 1.0 - std::accumulate(weights.begin(), weights.end(), 0.0);
  auto largest = std::max_element(weights.begin(), weights.end());
  *largest += residue;
  return PowerPmf(std::move(weights));
}

PowerPmf PowerPmf::mixture(std::span<const PowerPmf> components) {
  if (components.empty()) throw std::invalid_argument("mixture of zero pmfs");
  std::vector<double> acc(components.front().levels(), 0.0);
  for (const auto& c : components) {
    if (c.levels() != acc.size()) throw std::invalid_argument("mixture components use different grids");
    for (std::size_t n = 0; n < acc.size(); ++n) acc[n] += c[n];
  }
  return from_weights(std::move(acc));
}

double PowerPmf::mean_sqrt_power(std::span<const double> level_powers) const {
  if (level_powers.size() != probs_.size()) throw std::invalid_argument("power grid size mismatch");
  double m = 0.0;
  for (std::size_t n = 0; n < probs_.size(); ++n)
    if (level_powers[n] > 0.0) m += probs_[n] * std::sqrt(level_powers[n]);
  return m;
}

double PowerPmf::mean_power(std::span<const double> level_powers) const {
  if (level_powers.size() != probs_.size()) throw std::invalid_argument("power grid size mismatch");
  double m = 0.0;
  for (std::size_t n = 0; n < probs_.size(); ++n) m += probs_[n] * level_powers[n];
  return m;
}

}  // namespace opshare
