#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

namespace opshare {

/// Probability mass function over the discrete power levels of an SBS.
/// Entries are nonnegative and sum to one within 1e-12.
class PowerPmf {
 public:
  /// Validates; throws std::invalid_argument on negative entries or a bad sum.
  explicit PowerPmf(std::vector<double> probabilities);

  static PowerPmf degenerate(std::size_t levels, std::size_t level);
  static PowerPmf uniform(std::size_t levels);
  /// Normalizes nonnegative weights with a positive sum.
  static PowerPmf from_weights(std::vector<double> weights);
  /// Equal-weight mixture of pmfs over the same grid.
  static PowerPmf mixture(std::span<const PowerPmf> components);

  std::size_t levels() const { return probs_.size(); }
  double operator[](std::size_t n) const { return probs_[n]; }
  std::span<const double> probabilities() const { return probs_; }

  /// E[sqrt(p)] over the given level powers. Silent levels contribute 0.
  double mean_sqrt_power(std::span<const double> level_powers) const;
  double mean_power(std::span<const double> level_powers) const;

  template <class Rng>
  std::size_t sample(Rng& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double u = unit(rng);
    for (std::size_t n = 0; n + 1 < probs_.size(); ++n) {
      if (u < probs_[n]) return n;
      u -= probs_[n];
    }
    return probs_.size() - 1;
  }

  bool operator==(const PowerPmf&) const = default;

 private:
  std::vector<double> probs_;
};

}  // namespace opshare
