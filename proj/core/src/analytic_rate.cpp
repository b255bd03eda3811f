#include "opshare/analytic_rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "opshare/errors.hpp"
#include "opshare/quadrature.hpp"

namespace opshare {

namespace {

constexpr double kPi = std::numbers::pi;

void require_closed_form_model(const NetworkConfig& cfg) {
  if (cfg.pathloss_exponent != 4.0 || cfg.fading_rate != 1.0)
    throw UnsupportedModelError("closed-form expected rate requires alpha = 4 and eta = 1");
}

QuadratureOptions quad_options(const RateOptions& opts) { return {opts.tolerance, opts.max_depth}; }

double integrate_decaying(const std::function<double(double)>& f, const RateOptions& opts) {
  const double upper = decay_point(f, opts.tail_cutoff);
  if (upper == 0.0) return 0.0;
  return integrate(f, 0.0, upper, quad_options(opts)).value;
}

// Exponent scale A (or z at r = r_c) of the interference Laplace transform.
double interference_scale(double lambda_l, double own_power_w, double mean_sqrt_interferer, double r) {
  return lambda_l * kPi * kPi * r * r * mean_sqrt_interferer / (2.0 * std::sqrt(own_power_w));
}

double noise_limited_deconditioned(double own_power_w, const NetworkConfig& cfg, const RateOptions& opts) {
  const double rc = cfg.ue_radius_m;
  if (opts.decondition == DeconditionMethod::nested) {
    const auto f = [&](double r) {
      if (r <= 0.0) return 0.0;
      return noise_limited_rate(own_power_w, r, cfg, opts) * 2.0 * r / (rc * rc);
    };
    return integrate(f, 0.0, rc, quad_options(opts)).value;
  }
  // P(h > (e^t - 1) r^4 sigma^2 / p) = exp(-b r^4), averaged over r^2 uniform on [0, rc^2].
  const auto g = [&](double t) {
    const double b = std::expm1(t) * cfg.noise_power_w / own_power_w;
    const double w = std::sqrt(b) * rc * rc;
    if (w < 1e-8) return 1.0;
    return std::sqrt(kPi) * std::erf(w) / (2.0 * w);
  };
  return integrate_decaying(g, opts);
}

}  // namespace

std::vector<RbIntensity> rb_intensity(const Matching& m, const NetworkConfig& cfg) {
  std::vector<RbIntensity> out(m.rb_count());
  for (std::size_t l = 0; l < m.rb_count(); ++l) {
    auto& entry = out[l];
    for (ChildId c : m.occupants(RbId{l})) {
      entry.operators.push_back(m.ops().parent(c));
      ++entry.children;
    }
    std::sort(entry.operators.begin(), entry.operators.end());
    entry.operators.erase(std::unique(entry.operators.begin(), entry.operators.end()), entry.operators.end());
    entry.intensity = static_cast<double>(entry.children) * cfg.sbs_intensity;
  }
  return out;
}

double interference_shape(double t, RateIntegrand integrand) {
  const double em1 = std::expm1(t);
  return integrand == RateIntegrand::as_printed ? std::sqrt(em1 * t) : std::sqrt(em1);
}

double noise_limited_rate(double own_power_w, double r_ff, const NetworkConfig& cfg, const RateOptions& opts) {
  if (!(own_power_w > 0.0)) throw std::domain_error("own power must be positive");
  if (!(r_ff > 0.0)) throw std::domain_error("serving distance must be positive");
  const double snr = std::pow(r_ff, -cfg.pathloss_exponent) * own_power_w / cfg.noise_power_w;
  const double eta = cfg.fading_rate;
  const auto f = [&](double h) { return eta * std::exp(-eta * h) * std::log1p(h * snr); };
  return integrate(f, 0.0, std::numeric_limits<double>::infinity(), quad_options(opts)).value;
}

double expected_rate_conditional(double lambda_l, double own_power_w, const PowerPmf& interferer, double r_ff,
                                 const NetworkConfig& cfg, const RateOptions& opts) {
  require_closed_form_model(cfg);
  if (!(own_power_w > 0.0)) throw std::domain_error("own power must be positive");
  if (!(r_ff > 0.0)) throw std::domain_error("serving distance must be positive");
  if (!(lambda_l >= 0.0)) throw std::domain_error("RB intensity must be nonnegative");

  const double m = interferer.mean_sqrt_power(cfg.power_grid());
  const double a = interference_scale(lambda_l, own_power_w, m, r_ff);
  if (a == 0.0) return noise_limited_rate(own_power_w, r_ff, cfg, opts);
  const auto f = [&](double t) { return std::exp(-a * interference_shape(t, opts.integrand)); };
  return integrate_decaying(f, opts);
}

double expected_rate_deconditioned(double lambda_l, double own_power_w, const PowerPmf& interferer,
                                   const NetworkConfig& cfg, const RateOptions& opts) {
  require_closed_form_model(cfg);
  if (!(own_power_w > 0.0)) throw std::domain_error("own power must be positive");
  if (!(lambda_l >= 0.0)) throw std::domain_error("RB intensity must be nonnegative");

  const double rc = cfg.ue_radius_m;
  const double m = interferer.mean_sqrt_power(cfg.power_grid());
  const double z = interference_scale(lambda_l, own_power_w, m, rc);
  if (z == 0.0) return noise_limited_deconditioned(own_power_w, cfg, opts);

  if (opts.decondition == DeconditionMethod::nested) {
    const auto f = [&](double r) {
      if (r <= 0.0) return 0.0;
      return expected_rate_conditional(lambda_l, own_power_w, interferer, r, cfg, opts) * 2.0 * r / (rc * rc);
    };
    return integrate(f, 0.0, rc, quad_options(opts)).value;
  }
  // int_0^rc exp(-x r^2 / rc^2) 2r / rc^2 dr = (1 - e^-x) / x with x = z s(t).
  const auto g = [&](double t) {
    const double x = z * interference_shape(t, opts.integrand);
    if (x < 1e-10) return 1.0 - 0.5 * x;
    return -std::expm1(-x) / x;
  };
  return integrate_decaying(g, opts);
}

double expected_rate_over_pmf(double lambda_l, const PowerPmf& own, const PowerPmf& interferer,
                              const NetworkConfig& cfg, const RateOptions& opts) {
  const auto grid = cfg.power_grid();
  if (own.levels() != grid.size()) throw std::invalid_argument("own pmf does not match the power grid");
  double rate = 0.0;
  for (std::size_t n = 0; n < grid.size(); ++n) {
    if (own[n] == 0.0 || grid[n] <= 0.0) continue;
    rate += own[n] * expected_rate_deconditioned(lambda_l, grid[n], interferer, cfg, opts);
  }
  return rate;
}

double expected_rate_sbs(std::span<const double> intensity_per_rb, std::span<const RbId> rbs_of_parent,
                         const PowerPmf& own, const PowerPmf& interferer, const NetworkConfig& cfg,
                         const RateOptions& opts) {
  if (rbs_of_parent.empty()) throw std::invalid_argument("parent holds no RB");
  double sum = 0.0;
  for (RbId l : rbs_of_parent)
    sum += expected_rate_over_pmf(intensity_per_rb[l.value], own, interferer, cfg, opts);
  return sum / static_cast<double>(rbs_of_parent.size());
}

OperatorRate expected_rate_operator(std::size_t parent, const Matching& m, std::span<const PowerPmf> parent_sbs_pmfs,
                                    const PowerPmf& interferer, const NetworkConfig& cfg,
                                    const RateOptions& opts) {
  const auto rbs = m.rbs_of_parent(parent);
  if (rbs.empty()) return {0.0, false};
  std::vector<double> intensity;
  for (const auto& entry : rb_intensity(m, cfg)) intensity.push_back(entry.intensity);
  const PowerPmf own = parent_sbs_pmfs.empty() ? interferer : PowerPmf::mixture(parent_sbs_pmfs);
  const double per_sbs = expected_rate_sbs(intensity, rbs, own, interferer, cfg, opts);
  return {cfg.expected_sbs_per_operator() * cfg.sbs_weight * per_sbs, true};
}

RateTable::RateTable(const NetworkConfig& cfg, std::vector<PowerPmf> parent_pmfs, PowerPmf interferer,
                     const RateOptions& opts) {
  if (parent_pmfs.size() != cfg.num_operators) throw std::invalid_argument("need one pmf per parent operator");
  const std::size_t max_occ = std::max<std::size_t>(cfg.max_supply(), 1);
  const double scale = cfg.expected_sbs_per_operator() * cfg.sbs_weight;
  rates_.resize(parent_pmfs.size());
  for (std::size_t k = 0; k < parent_pmfs.size(); ++k) {
    const auto same = std::find(parent_pmfs.begin(), parent_pmfs.begin() + static_cast<std::ptrdiff_t>(k),
                                parent_pmfs[k]);
    if (same != parent_pmfs.begin() + static_cast<std::ptrdiff_t>(k)) {
      rates_[k] = rates_[static_cast<std::size_t>(same - parent_pmfs.begin())];
      continue;
    }
    rates_[k].resize(max_occ);
    for (std::size_t occ = 1; occ <= max_occ; ++occ) {
      const double lambda_l = static_cast<double>(occ) * cfg.sbs_intensity;
      rates_[k][occ - 1] = scale * expected_rate_over_pmf(lambda_l, parent_pmfs[k], interferer, cfg, opts);
    }
  }
  for (std::size_t k = 0; k < cfg.num_operators; ++k) weights_.push_back(cfg.operator_weight(k));
  demand_ = cfg.demand;
}

RateTable RateTable::homogeneous(const NetworkConfig& cfg, const PowerPmf& pmf, const RateOptions& opts) {
  return RateTable(cfg, std::vector<PowerPmf>(cfg.num_operators, pmf), pmf, opts);
}

RateTable RateTable::from_child_rates(std::vector<std::vector<double>> child_rates, std::vector<double> weights,
                                      std::vector<std::size_t> demand) {
  if (child_rates.size() != weights.size() || child_rates.size() != demand.size())
    throw std::invalid_argument("rate table dimensions disagree");
  for (const auto& row : child_rates)
    if (row.size() != child_rates.front().size()) throw std::invalid_argument("ragged rate table");
  RateTable t;
  t.rates_ = std::move(child_rates);
  t.weights_ = std::move(weights);
  t.demand_ = std::move(demand);
  return t;
}

double RateTable::child_rate(std::size_t parent, std::size_t occupancy) const {
  if (occupancy == 0) return 0.0;
  const auto& row = rates_.at(parent);
  if (occupancy > row.size()) throw std::out_of_range("occupancy beyond the tabulated supply");
  return row[occupancy - 1];
}

double RateTable::desirability(std::size_t parent, std::size_t occupancy) const {
  return weights_.at(parent) * child_rate(parent, occupancy) / static_cast<double>(demand_.at(parent));
}

}  // namespace opshare
