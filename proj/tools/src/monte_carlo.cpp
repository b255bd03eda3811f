#include "opshare/tools/monte_carlo.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace opshare::tools {

MonteCarloRate monte_carlo_rate(double lambda_l, double own_power_w, std::span<const double> interferer_powers,
                                double r_ff, double alpha, std::size_t realizations, std::uint64_t seed,
                                double radius) {
  if (realizations < 2) throw std::invalid_argument("need at least two realizations");
  if (interferer_powers.empty()) throw std::invalid_argument("need at least one interferer power");
  if (!(lambda_l > 0.0)) throw std::invalid_argument("the SIR oracle needs a positive interferer intensity");
  std::mt19937_64 rng(seed);
  std::poisson_distribution<long> count(lambda_l * std::numbers::pi * radius * radius);
  std::exponential_distribution<double> fading(1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> level(0, interferer_powers.size() - 1);

  double sum = 0.0;
  double sum_sq = 0.0;
  const double signal_gain = own_power_w * std::pow(r_ff, -alpha);
  for (std::size_t i = 0; i < realizations; ++i) {
    const long n = count(rng);
    double interference = 0.0;
    for (long j = 0; j < n; ++j) {
      // Squared distance is uniform on [0, R^2] for a uniform point on the disc.
      const double d2 = radius * radius * unit(rng);
      const double power = interferer_powers[level(rng)];
      interference += fading(rng) * power * std::pow(d2, -alpha / 2.0);
    }
    const double signal = fading(rng) * signal_gain;
    const double rate = interference > 0.0 ? std::log1p(signal / interference) : 0.0;
    sum += rate;
    sum_sq += rate * rate;
  }
  const double n = static_cast<double>(realizations);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

}  // namespace opshare::tools
