#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "opshare/network_config.hpp"

namespace opshare {

struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

double distance(Point a, Point b);

/// ANALYTIC: pure r^-alpha pathloss with Rayleigh fading (the setting of the
/// closed-form rate analysis). EMPIRICAL: dB pathloss with wall loss,
/// log-normal shadowing and Rayleigh fading.
enum class ChannelMode { analytic, empirical };

const char* to_string(ChannelMode mode);

enum class LinkKind { direct, cross };

/// One sampled realization of the network. SBSs are stored operator-major;
/// SBS f serves UE f. Link arrays are indexed [tx * sbs_count() + rx] for the
/// link from SBS tx to the UE of SBS rx.
struct Deployment {
  std::uint64_t seed = 0;
  std::size_t num_operators = 0;
  std::vector<Point> sbs;
  std::vector<Point> ue;
  std::vector<std::size_t> operator_of;
  /// SBSs of operator k are [operator_offset[k], operator_offset[k + 1]).
  std::vector<std::size_t> operator_offset;
  std::vector<double> fading;
  std::vector<double> shadowing_db;

  std::size_t sbs_count() const { return sbs.size(); }
  std::size_t sbs_count(std::size_t k) const { return operator_offset[k + 1] - operator_offset[k]; }
  std::size_t first_sbs(std::size_t k) const { return operator_offset[k]; }
  double fading_gain(std::size_t tx, std::size_t rx) const { return fading[tx * sbs_count() + rx]; }
  double shadowing(std::size_t tx, std::size_t rx) const { return shadowing_db[tx * sbs_count() + rx]; }

  bool operator==(const Deployment&) const = default;
};

/// Independent homogeneous PPP per operator on the deployment disc, one UE per
/// SBS uniform on the r_c disc around it, i.i.d. fading and shadowing per link.
/// Deterministic in `seed`. Throws ConfigError on an invalid configuration.
Deployment sample_deployment(const NetworkConfig& cfg, std::uint64_t seed);

/// Empirical pathloss in dB. Throws std::domain_error for d <= 0.
double pathloss_db(const NetworkConfig& cfg, double distance_m, LinkKind kind);

/// Large-scale power gain (fading excluded) from SBS tx to the UE of SBS rx.
double path_gain(const NetworkConfig& cfg, const Deployment& dep, std::size_t tx, std::size_t rx,
                 ChannelMode mode);

/// Precomputed large-scale gains for a deployment, so fading can be redrawn
/// per slot without recomputing geometry.
class LinkBudget {
 public:
  LinkBudget(const NetworkConfig& cfg, const Deployment& dep, ChannelMode mode);

  double gain(std::size_t tx, std::size_t rx) const { return gains_[tx * count_ + rx]; }
  std::size_t sbs_count() const { return count_; }

 private:
  std::size_t count_;
  std::vector<double> gains_;
};

/// SINR of the UE served by `target` when SBS f transmits on rb_of_sbs[f]
/// (nullopt: silent) at power_of_sbs[f] watts, using the deployment's stored
/// fading. Interferers are all other SBSs on the target's RB. Throws
/// std::out_of_range for an unknown target and std::invalid_argument when the
/// target is not transmitting on any RB.
double instantaneous_sinr(const NetworkConfig& cfg, const Deployment& dep,
                          std::span<const std::optional<std::size_t>> rb_of_sbs,
                          std::span<const double> power_of_sbs, std::size_t target, ChannelMode mode);

}  // namespace opshare
