#pragma once

// Expected SBS and operator rates from stochastic geometry. Interferers on an
// RB form a homogeneous PPP of intensity lambda_l; with alpha = 4 and unit-rate
// Rayleigh fading the Laplace transform of the interference is closed form and
// the expected rate reduces to a 1D integral in t:
//
//   E[R | r] = int_0^inf exp(-A * s(t)) dt,   A = lambda_l pi^2 r^2 E[sqrt p'] / (2 sqrt p)
//
// with s(t) = sqrt(e^t - 1). Rates are in nats; see convert_rate for bits.

#include <cstddef>
#include <span>
#include <vector>

#include "opshare/matching.hpp"
#include "opshare/network_config.hpp"
#include "opshare/power_pmf.hpp"

namespace opshare {

enum class RateIntegrand {
  corrected,   // s(t) = sqrt(e^t - 1), agrees with Monte Carlo of log(1 + SIR)
  as_printed,  // s(t) = sqrt((e^t - 1) t)
};

/// How the conditional rate is averaged over the serving distance r_ff,
/// whose density is 2r / r_c^2 on [0, r_c].
enum class DeconditionMethod {
  interchanged,  // integrate r in closed form inside the t integral
  nested,        // outer adaptive quadrature over r of the conditional rate
};

struct RateOptions {
  RateIntegrand integrand = RateIntegrand::corrected;
  DeconditionMethod decondition = DeconditionMethod::interchanged;
  double tolerance = 1e-12;
  unsigned max_depth = 20;
  /// The t range is truncated where the integrand drops below this value.
  double tail_cutoff = 1e-12;
};

struct RbIntensity {
  double intensity = 0.0;
  std::vector<std::size_t> operators;  // parents with at least one child on the RB
  std::size_t children = 0;

  bool operator==(const RbIntensity&) const = default;
};

/// Interferer intensity per RB: every child inherits the SBS population of its
/// parent, so each child on RB l adds lambda.
std::vector<RbIntensity> rb_intensity(const Matching& m, const NetworkConfig& cfg);

double interference_shape(double t, RateIntegrand integrand);

/// E[log(1 + SIR)] for a UE at distance r_ff from its SBS transmitting at
/// own_power_w, interferers of intensity lambda_l drawing powers from
/// `interferer`. With no interference (lambda_l = 0 or all interferers
/// silent) returns the noise-limited rate instead. Throws
/// UnsupportedModelError unless alpha = 4 and eta = 1, std::domain_error for
/// nonpositive power or distance.
double expected_rate_conditional(double lambda_l, double own_power_w, const PowerPmf& interferer, double r_ff,
                                 const NetworkConfig& cfg, const RateOptions& opts = {});

/// E[log(1 + h r^-alpha p / sigma^2)] with h exponential, by quadrature over the
/// fading density.
double noise_limited_rate(double own_power_w, double r_ff, const NetworkConfig& cfg,
                          const RateOptions& opts = {});

/// expected_rate_conditional averaged over r_ff ~ 2r / r_c^2.
double expected_rate_deconditioned(double lambda_l, double own_power_w, const PowerPmf& interferer,
                                   const NetworkConfig& cfg, const RateOptions& opts = {});

/// E_n over the SBS's own power pmf of the de-conditioned rate. Silent levels
/// contribute zero.
double expected_rate_over_pmf(double lambda_l, const PowerPmf& own, const PowerPmf& interferer,
                              const NetworkConfig& cfg, const RateOptions& opts = {});

/// Per-SBS rate: uniform average over the parent's RBs of expected_rate_over_pmf.
/// Throws std::invalid_argument if rbs_of_parent is empty.
double expected_rate_sbs(std::span<const double> intensity_per_rb, std::span<const RbId> rbs_of_parent,
                         const PowerPmf& own, const PowerPmf& interferer, const NetworkConfig& cfg,
                         const RateOptions& opts = {});

struct OperatorRate {
  double rate = 0.0;
  /// False when the parent holds no RB; rate is then 0.
  bool matched = false;
};

/// Sum of weighted SBS rates of a parent, using the expected SBS count per
/// operator. parent_sbs_pmfs are mixed into the parent's power pmf (exact,
/// since the per-SBS rate is linear in the own pmf).
OperatorRate expected_rate_operator(std::size_t parent, const Matching& m, std::span<const PowerPmf> parent_sbs_pmfs,
                                    const PowerPmf& interferer, const NetworkConfig& cfg,
                                    const RateOptions& opts = {});

/// Memoized child rates indexed by (parent, occupancy of the child's RB).
/// Valid because, with a network-wide interferer pmf, a child's rate depends
/// only on how many children share its RB.
class RateTable {
 public:
  RateTable(const NetworkConfig& cfg, std::vector<PowerPmf> parent_pmfs, PowerPmf interferer,
            const RateOptions& opts = {});

  /// Every parent and every interferer use the same pmf.
  static RateTable homogeneous(const NetworkConfig& cfg, const PowerPmf& pmf, const RateOptions& opts = {});

  /// Table from explicit child rates [parent][occupancy - 1], for tests and tools.
  static RateTable from_child_rates(std::vector<std::vector<double>> child_rates, std::vector<double> weights,
                                    std::vector<std::size_t> demand);

  /// Unweighted child-operator rate: expected SBS count * rho_f * per-SBS rate.
  double child_rate(std::size_t parent, std::size_t occupancy) const;
  /// rho_k * child_rate / c_k, the child's share of its parent's weighted rate.
  double desirability(std::size_t parent, std::size_t occupancy) const;

  std::size_t parent_count() const { return rates_.size(); }
  std::size_t max_occupancy() const { return rates_.empty() ? 0 : rates_.front().size(); }
  double weight(std::size_t parent) const { return weights_[parent]; }
  std::size_t demand(std::size_t parent) const { return demand_[parent]; }

 private:
  RateTable() = default;

  std::vector<std::vector<double>> rates_;
  std::vector<double> weights_;
  std::vector<std::size_t> demand_;
};

}  // namespace opshare
