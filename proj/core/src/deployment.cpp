#include "opshare/deployment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace opshare {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

const char* to_string(ChannelMode mode) { return mode == ChannelMode::analytic ? "analytic" : "empirical"; }

namespace {

Point uniform_on_disc(std::mt19937_64& rng, Point center, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double theta = 2.0 * std::numbers::pi * unit(rng);
  return {center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
}

}  // namespace

Deployment sample_deployment(const NetworkConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);

  Deployment dep;
  dep.seed = seed;
  dep.num_operators = cfg.num_operators;
  dep.operator_offset.push_back(0);

  const double mean_count = cfg.expected_sbs_per_operator();
  for (std::size_t k = 0; k < cfg.num_operators; ++k) {
    std::size_t count = 0;
    if (mean_count > 0.0) {
      std::poisson_distribution<std::size_t> poisson(mean_count);
      count = poisson(rng);
    }
    for (std::size_t i = 0; i < count; ++i) {
      const Point bs = uniform_on_disc(rng, {0.0, 0.0}, cfg.area_radius_m);
      dep.sbs.push_back(bs);
      dep.ue.push_back(uniform_on_disc(rng, bs, cfg.ue_radius_m));
      dep.operator_of.push_back(k);
    }
    dep.operator_offset.push_back(dep.sbs.size());
  }

  const std::size_t n = dep.sbs.size();
  dep.fading.resize(n * n);
  dep.shadowing_db.resize(n * n);
  std::exponential_distribution<double> fading(cfg.fading_rate);
  std::normal_distribution<double> shadow(0.0, 1.0);
  for (std::size_t i = 0; i < n * n; ++i) {
    double h = fading(rng);
    while (h <= 0.0) h = fading(rng);
    dep.fading[i] = h;
    dep.shadowing_db[i] = cfg.shadowing_std_db * shadow(rng);
  }
  return dep;
}

double pathloss_db(const NetworkConfig& cfg, double distance_m, LinkKind kind) {
  if (!(distance_m > 0.0)) throw std::domain_error("pathloss distance must be positive");
  const auto& pl = cfg.pathloss;
  const double decades = std::log10(distance_m);
  if (kind == LinkKind::direct) return pl.direct_intercept_db + pl.direct_slope_db * decades;
  return pl.cross_intercept_db + pl.cross_slope_db * decades + pl.wall_loss_db;
}

double path_gain(const NetworkConfig& cfg, const Deployment& dep, std::size_t tx, std::size_t rx,
                 ChannelMode mode) {
  const double d = distance(dep.sbs.at(tx), dep.ue.at(rx));
  if (mode == ChannelMode::analytic) return std::pow(d, -cfg.pathloss_exponent);
  const double floored = std::max(d, cfg.pathloss.min_distance_m);
  const LinkKind kind = tx == rx ? LinkKind::direct : LinkKind::cross;
  return db_to_linear(-(pathloss_db(cfg, floored, kind) + dep.shadowing(tx, rx)));
}

LinkBudget::LinkBudget(const NetworkConfig& cfg, const Deployment& dep, ChannelMode mode)
    : count_(dep.sbs_count()), gains_(count_ * count_) {
  for (std::size_t tx = 0; tx < count_; ++tx)
    for (std::size_t rx = 0; rx < count_; ++rx) gains_[tx * count_ + rx] = path_gain(cfg, dep, tx, rx, mode);
}

double instantaneous_sinr(const NetworkConfig& cfg, const Deployment& dep,
                          std::span<const std::optional<std::size_t>> rb_of_sbs,
                          std::span<const double> power_of_sbs, std::size_t target, ChannelMode mode) {
  const std::size_t n = dep.sbs_count();
  if (target >= n) throw std::out_of_range("unknown SBS id " + std::to_string(target));
  if (rb_of_sbs.size() != n || power_of_sbs.size() != n)
    throw std::invalid_argument("RB and power maps must cover every SBS");
  if (!rb_of_sbs[target]) throw std::invalid_argument("target SBS is not transmitting on any RB");

  const std::size_t rb = *rb_of_sbs[target];
  double interference = 0.0;
  for (std::size_t f = 0; f < n; ++f) {
    if (f == target || rb_of_sbs[f] != rb) continue;
    interference += dep.fading_gain(f, target) * path_gain(cfg, dep, f, target, mode) * power_of_sbs[f];
  }
  const double signal = dep.fading_gain(target, target) * path_gain(cfg, dep, target, target, mode) *
                        power_of_sbs[target];
  return signal / (interference + cfg.noise_power_w);
}

}  // namespace opshare
