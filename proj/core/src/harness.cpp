#include "opshare/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "opshare/errors.hpp"
#include "opshare/qlearning.hpp"
#include "opshare/welfare.hpp"

namespace opshare {

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::convergence_trace: return "convergence-trace";
    case ExperimentKind::welfare_cdf: return "welfare-cdf";
    case ExperimentKind::welfare_vs_L: return "welfare-vs-L";
    case ExperimentKind::demand_sweep: return "demand-sweep";
    case ExperimentKind::intensity_sweep: return "intensity-sweep";
  }
  return "?";
}

const char* to_string(PowerMode mode) {
  switch (mode) {
    case PowerMode::full: return "full";
    case PowerMode::uniform: return "uniform";
    case PowerMode::q_learning: return "q-learning";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(const std::string& text) {
  for (auto kind : {ExperimentKind::convergence_trace, ExperimentKind::welfare_cdf, ExperimentKind::welfare_vs_L,
                    ExperimentKind::demand_sweep, ExperimentKind::intensity_sweep})
    if (text == to_string(kind)) return kind;
  throw ConfigError("unknown experiment kind '" + text + "'");
}

PowerMode parse_power_mode(const std::string& text) {
  for (auto mode : {PowerMode::full, PowerMode::uniform, PowerMode::q_learning})
    if (text == to_string(mode)) return mode;
  throw ConfigError("unknown power mode '" + text + "' (expected full, uniform or q-learning)");
}

SearchAlgorithm parse_algorithm(const std::string& text) {
  if (text == "mcmc") return SearchAlgorithm::mcmc;
  if (text == "greedy") return SearchAlgorithm::greedy;
  throw ConfigError("unknown algorithm '" + text + "' (expected mcmc or greedy)");
}

namespace {

bool uniform_supply(const NetworkConfig& cfg) {
  return !cfg.supply.empty() &&
         std::all_of(cfg.supply.begin(), cfg.supply.end(), [&](std::size_t b) { return b == cfg.supply.front(); });
}

}  // namespace

std::size_t sweep_size(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::welfare_vs_L: return spec.rb_grid.size();
    case ExperimentKind::demand_sweep: return spec.demand_grid.size();
    case ExperimentKind::intensity_sweep: return spec.radius_grid.size();
    default: return 1;
  }
}

ExperimentSpec sweep_point(const ExperimentSpec& spec, std::size_t index) {
  ExperimentSpec point = spec;
  point.kind = ExperimentKind::welfare_cdf;
  auto& cfg = point.network;
  switch (spec.kind) {
    case ExperimentKind::welfare_vs_L: {
      if (!uniform_supply(cfg)) throw ConfigError("L sweep requires a uniform supply vector b");
      const std::size_t rbs = spec.rb_grid.at(index);
      cfg.supply.assign(rbs, cfg.supply.front());
      cfg.num_rbs = rbs;
      point.id = spec.id + "/L=" + std::to_string(rbs);
      break;
    }
    case ExperimentKind::demand_sweep: {
      const auto& demand = spec.demand_grid.at(index);
      if (!cfg.operator_weights.empty() && cfg.operator_weights.size() != demand.size())
        throw ConfigError("demand sweep changes K but rho_op has a fixed length");
      cfg.demand = demand;
      cfg.num_operators = demand.size();
      std::string tag;
      for (std::size_t c : demand) tag += (tag.empty() ? "" : "-") + std::to_string(c);
      point.id = spec.id + "/c=" + tag;
      break;
    }
    case ExperimentKind::intensity_sweep: {
      const double count = cfg.expected_sbs_per_operator();
      const double radius = spec.radius_grid.at(index);
      cfg.area_radius_m = radius;
      cfg.sbs_intensity = count / (std::numbers::pi * radius * radius);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", radius);
      point.id = spec.id + "/R=" + buf;
      break;
    }
    default:
      if (index != 0) throw std::out_of_range("experiment has a single point");
  }
  return point;
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw ConfigError("invalid experiment: trials must be at least 1");
  if (iterations < 1) throw ConfigError("invalid experiment: iterations must be at least 1");
  if (power_mode == PowerMode::q_learning && epoch_steps < 1)
    throw ConfigError("invalid experiment: epoch_steps must be at least 1");
  switch (kind) {
    case ExperimentKind::welfare_vs_L:
      if (rb_grid.empty()) throw ConfigError("invalid experiment: L_grid must be nonempty");
      break;
    case ExperimentKind::demand_sweep:
      if (demand_grid.empty()) throw ConfigError("invalid experiment: demand_grid must be nonempty");
      break;
    case ExperimentKind::intensity_sweep:
      if (radius_grid.empty()) throw ConfigError("invalid experiment: radius_grid must be nonempty");
      for (double r : radius_grid)
        if (!(r > 0.0)) throw ConfigError("invalid experiment: radius_grid entries must be positive");
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < sweep_size(*this); ++i) sweep_point(*this, i).network.validate();
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string list(const std::vector<T>& v) {
  std::string out;
  for (const auto& x : v) {
    if (!out.empty()) out += ' ';
    if constexpr (std::is_floating_point_v<T>) out += num(x);
    else out += std::to_string(x);
  }
  return out;
}

}  // namespace

std::string canonical_text(const ExperimentSpec& spec) {
  const auto& n = spec.network;
  const auto& q = n.learning;
  std::ostringstream out;
  out << "experiment.id=" << spec.id << '\n'
      << "experiment.kind=" << to_string(spec.kind) << '\n'
      << "experiment.trials=" << spec.trials << '\n'
      << "experiment.iterations=" << spec.iterations << '\n'
      << "experiment.power_mode=" << to_string(spec.power_mode) << '\n'
      << "experiment.seed=" << spec.seed << '\n'
      << "experiment.L_grid=" << list(spec.rb_grid) << '\n';
  out << "experiment.demand_grid=";
  for (std::size_t i = 0; i < spec.demand_grid.size(); ++i) out << (i ? "; " : "") << list(spec.demand_grid[i]);
  out << '\n'
      << "experiment.radius_grid=" << list(spec.radius_grid) << '\n'
      << "matching.algorithm=" << to_string(spec.algorithm) << '\n'
      << "matching.T_b=" << num(n.acceptance_sharpness) << '\n'
      << "network.K=" << n.num_operators << '\n'
      << "network.L=" << n.num_rbs << '\n'
      << "network.c=" << list(n.demand) << '\n'
      << "network.b=" << list(n.supply) << '\n'
      << "network.lambda=" << num(n.sbs_intensity) << '\n'
      << "network.area_radius=" << num(n.area_radius_m) << '\n'
      << "network.r_c=" << num(n.ue_radius_m) << '\n'
      << "network.alpha=" << num(n.pathloss_exponent) << '\n'
      << "network.eta=" << num(n.fading_rate) << '\n'
      << "network.sigma2=" << num(n.noise_power_w) << '\n'
      << "network.p_tot=" << num(n.max_power_w) << '\n'
      << "network.power_levels=" << n.power_levels << '\n'
      << "network.sinr_th=" << num(n.sinr_threshold) << '\n'
      << "network.rho_op=" << list(n.operator_weights) << '\n'
      << "network.rho_sbs=" << num(n.sbs_weight) << '\n'
      << "channel.mode=" << to_string(spec.learning_channel) << '\n'
      << "channel.pathloss=" << num(n.pathloss.direct_intercept_db) << ' ' << num(n.pathloss.direct_slope_db) << ' '
      << num(n.pathloss.cross_intercept_db) << ' ' << num(n.pathloss.cross_slope_db) << ' '
      << num(n.pathloss.wall_loss_db) << ' ' << num(n.pathloss.min_distance_m) << '\n'
      << "channel.shadow_sigma_db=" << num(n.shadowing_std_db) << '\n'
      << "qlearning.gamma=" << num(q.discount) << '\n'
      << "qlearning.epsilon=" << num(q.epsilon) << '\n'
      << "qlearning.T_p=" << (q.boltzmann_temperature ? num(*q.boltzmann_temperature) : "none") << '\n'
      << "qlearning.beta="
      << (q.rate.kind == LearningRate::Kind::harmonic ? std::string("harmonic") : num(q.rate.value)) << '\n'
      << "qlearning.max_operator=" << (q.max_operator == MaxOperator::all_actions ? "all" : "exclude-taken") << '\n'
      << "qlearning.pmf_estimate=" << (q.pmf_estimate == PmfEstimate::empirical_window ? "empirical" : "policy")
      << '\n'
      << "qlearning.pmf_window=" << q.pmf_window << '\n'
      << "qlearning.epoch_steps=" << spec.epoch_steps << '\n'
      << "rate.integrand=" << (spec.rate.integrand == RateIntegrand::corrected ? "corrected" : "as-printed") << '\n'
      << "rate.decondition=" << (spec.rate.decondition == DeconditionMethod::interchanged ? "interchanged" : "nested")
      << '\n';
  return out.str();
}

std::uint64_t fnv1a_64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double steady_state(const std::vector<double>& trace) {
  if (trace.empty()) return 0.0;
  const std::size_t tail = std::max<std::size_t>(1, trace.size() / 10);
  const auto first = trace.end() - static_cast<std::ptrdiff_t>(tail);
  return std::accumulate(first, trace.end(), 0.0) / static_cast<double>(tail);
}

std::vector<double> running_average(const std::vector<double>& trace) {
  std::vector<double> out(trace.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    sum += trace[i];
    out[i] = sum / static_cast<double>(i + 1);
  }
  return out;
}

namespace {

// Per-SBS learners of one trial. Every SBS of a parent transmits on the RBs its
// parent holds; in an epoch each SBS picks one of them and hears every other
// SBS whose parent holds that RB.
class LearningState {
 public:
  LearningState(const NetworkConfig& cfg, const ExperimentSpec& spec, std::uint64_t seed)
      : cfg_(cfg),
        epoch_steps_(spec.epoch_steps),
        dep_(sample_deployment(cfg, splitmix64(seed))),
        links_(cfg, dep_, spec.learning_channel),
        grid_(cfg.power_grid()),
        rng_(splitmix64(seed ^ 0x5bd1e995ULL)) {
    learners_.assign(dep_.sbs_count(), PowerLearner(grid_.size(), cfg.learning));
    for (std::size_t f = 0; f < learners_.size(); ++f) pmfs_.push_back(learners_[f].pmf());
  }

  void epoch(const Matching& m) {
    const std::size_t n = dep_.sbs_count();
    if (n == 0) return;
    std::vector<std::vector<RbId>> held(cfg_.num_operators);
    for (std::size_t k = 0; k < cfg_.num_operators; ++k) held[k] = m.rbs_of_parent(k);

    std::vector<std::optional<RbId>> rb_of(n);
    for (std::size_t f = 0; f < n; ++f) {
      const auto& rbs = held[dep_.operator_of[f]];
      if (rbs.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, rbs.size() - 1);
      rb_of[f] = rbs[pick(rng_)];
    }
    std::vector<LearningEnv> envs(n);
    for (std::size_t f = 0; f < n; ++f) {
      if (!rb_of[f]) continue;
      std::vector<std::size_t> interferers;
      for (std::size_t g = 0; g < n; ++g) {
        if (g == f) continue;
        const auto& rbs = held[dep_.operator_of[g]];
        if (std::binary_search(rbs.begin(), rbs.end(), *rb_of[f])) interferers.push_back(g);
      }
      envs[f] = LearningEnv::from_links(cfg_, links_, f, std::move(interferers));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng_);
    for (auto& learner : learners_) learner.start_window();

    std::exponential_distribution<double> fading(cfg_.fading_rate);
    std::vector<double> powers;
    std::vector<double> gains;
    for (std::size_t t = 0; t < epoch_steps_; ++t) {
      for (std::size_t f : order) {
        if (!rb_of[f]) continue;
        const auto& env = envs[f];
        const std::size_t a = learners_[f].act(rng_);
        powers.resize(env.interferers.size());
        for (std::size_t i = 0; i < powers.size(); ++i) powers[i] = grid_[pmfs_[env.interferers[i]].sample(rng_)];
        gains.resize(env.interferers.size() + 1);
        for (double& h : gains) h = fading(rng_);
        learners_[f].learn(a, observe(env, grid_[a], powers, gains));
      }
    }
    for (std::size_t f = 0; f < n; ++f)
      if (rb_of[f]) pmfs_[f] = learners_[f].pmf();
  }

  // Parent pmfs are mixtures over the parent's SBSs; the interferer pmf mixes
  // all SBSs. Parents without SBSs in this realization take the global mixture.
  std::pair<std::vector<PowerPmf>, PowerPmf> pmfs() const {
    const PowerPmf fallback = PowerPmf::degenerate(grid_.size(), grid_.size() - 1);
    const PowerPmf global = pmfs_.empty() ? fallback : PowerPmf::mixture(pmfs_);
    std::vector<PowerPmf> parents;
    for (std::size_t k = 0; k < cfg_.num_operators; ++k) {
      if (dep_.sbs_count(k) == 0) {
        parents.push_back(global);
        continue;
      }
      const auto first = pmfs_.begin() + static_cast<std::ptrdiff_t>(dep_.first_sbs(k));
      parents.push_back(PowerPmf::mixture({first, first + static_cast<std::ptrdiff_t>(dep_.sbs_count(k))}));
    }
    return {std::move(parents), global};
  }

 private:
  NetworkConfig cfg_;
  std::size_t epoch_steps_;
  Deployment dep_;
  LinkBudget links_;
  std::vector<double> grid_;
  std::mt19937_64 rng_;
  std::vector<PowerLearner> learners_;
  std::vector<PowerPmf> pmfs_;
};

}  // namespace

TrialResult run_trial(const ExperimentSpec& spec, std::uint64_t trial_seed) {
  const NetworkConfig& cfg = spec.network;
  cfg.validate();
  const std::size_t levels = cfg.power_levels;

  std::mt19937_64 init_rng(splitmix64(trial_seed + 1));
  const Matching initial = random_initial_matching(build_augmented(cfg), cfg.supply, init_rng);

  std::optional<LearningState> learning;
  std::vector<PowerPmf> parent_pmfs;
  PowerPmf interferer = PowerPmf::degenerate(levels, levels - 1);
  switch (spec.power_mode) {
    case PowerMode::full:
      parent_pmfs.assign(cfg.num_operators, interferer);
      break;
    case PowerMode::uniform:
      interferer = PowerPmf::uniform(levels);
      parent_pmfs.assign(cfg.num_operators, interferer);
      break;
    case PowerMode::q_learning: {
      learning.emplace(cfg, spec, splitmix64(trial_seed + 2));
      learning->epoch(initial);
      std::tie(parent_pmfs, interferer) = learning->pmfs();
      break;
    }
  }
  auto table = std::make_unique<RateTable>(cfg, parent_pmfs, interferer, spec.rate);

  SearchOptions opts;
  opts.algorithm = spec.algorithm;
  opts.max_iterations = spec.iterations;
  opts.seed = splitmix64(trial_seed + 3);
  opts.sharpness = cfg.acceptance_sharpness;
  SwapSearch search(initial, *table, opts);

  TrialResult out;
  out.seed = trial_seed;
  out.trace.reserve(spec.iterations);
  for (std::size_t it = 0; it < spec.iterations; ++it) {
    const bool changed = search.step(*table);
    if (changed && learning) {
      learning->epoch(search.current());
      std::tie(parent_pmfs, interferer) = learning->pmfs();
      table = std::make_unique<RateTable>(cfg, parent_pmfs, interferer, spec.rate);
      search.rescore(*table);
    }
    out.trace.push_back(search.current_value());
  }
  out.running_average = running_average(out.trace);
  out.steady_state = steady_state(out.trace);
  out.best = search.best();
  out.best_value = search.best_value();
  out.parent_rates = social_welfare(*out.best, *table).parent_rates;
  out.parent_pmfs = parent_pmfs;
  out.inter_operator_pairs = out.best->inter_operator_pairs();
  return out;
}

double ResultSet::mean() const {
  if (samples.empty()) return 0.0;
  return std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
}

double ResultSet::quantile(double p) const {
  if (samples.empty()) return 0.0;
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double ResultSet::median() const { return quantile(0.5); }

double ResultSet::standard_error() const {
  const std::size_t n = samples.size();
  if (n < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (double x : samples) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

double ResultSet::cdf(double x) const {
  if (samples.empty()) return 0.0;
  const auto below = std::count_if(samples.begin(), samples.end(), [&](double s) { return s <= x; });
  return static_cast<double>(below) / static_cast<double>(samples.size());
}

ResultSet run_ensemble(const ExperimentSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  spec.network.validate();

  std::vector<std::optional<TrialResult>> results(spec.trials);
  std::vector<std::string> errors(spec.trials);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < spec.trials; i = next++) {
      try {
        results[i] = run_trial(spec, spec.seed + i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::size_t jobs = spec.jobs == 0 ? std::max(1U, std::thread::hardware_concurrency()) : spec.jobs;
  jobs = std::min(jobs, spec.trials);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  ResultSet set;
  set.experiment_id = spec.id;
  set.num_operators = spec.network.num_operators;
  set.num_rbs = spec.network.num_rbs;
  set.power_mode = spec.power_mode;
  set.algorithm = spec.algorithm;
  set.config_hash = fnv1a_64(canonical_text(spec));
  set.per_operator_mean.assign(spec.network.num_operators, 0.0);
  for (std::size_t i = 0; i < spec.trials; ++i) {
    if (!results[i]) {
      set.failures.push_back({spec.seed + i, errors[i]});
      continue;
    }
    const auto& r = *results[i];
    set.seeds.push_back(r.seed);
    set.samples.push_back(r.steady_state);
    set.traces.push_back(r.running_average);
    set.inter_operator_pairs.push_back(r.inter_operator_pairs);
    for (std::size_t k = 0; k < r.parent_rates.size(); ++k) set.per_operator_mean[k] += r.parent_rates[k];
  }
  if (!set.samples.empty())
    for (double& v : set.per_operator_mean) v /= static_cast<double>(set.samples.size());
  set.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return set;
}

std::vector<ResultSet> run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<ResultSet> out;
  for (std::size_t i = 0; i < sweep_size(spec); ++i) {
    auto point = sweep_point(spec, i);
    if (sweep_size(spec) == 1) point.id = spec.id;
    out.push_back(run_ensemble(point));
  }
  return out;
}

ResultSet convert_units(ResultSet set, RateUnit unit) {
  if (set.unit == unit) return set;
  const double scale = convert_rate(1.0, unit) / convert_rate(1.0, set.unit);
  for (double& v : set.samples) v *= scale;
  for (auto& trace : set.traces)
    for (double& v : trace) v *= scale;
  for (double& v : set.per_operator_mean) v *= scale;
  set.unit = unit;
  return set;
}

std::optional<std::size_t> saturation_point(const std::vector<std::size_t>& rbs, const std::vector<double>& values,
                                            double tolerance) {
  if (rbs.size() != values.size() || rbs.empty()) return std::nullopt;
  // Walk back from the end while successive values stay within tolerance.
  std::size_t start = values.size() - 1;
  while (start > 0) {
    const double a = values[start - 1];
    const double b = values[start];
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale > 0.0 && std::abs(b - a) / scale >= tolerance) break;
    --start;
  }
  if (start == values.size() - 1 && values.size() > 1) return std::nullopt;
  return rbs[start];
}

SaturationCurve saturation_curve(const ExperimentSpec& spec, double tolerance) {
  if (spec.kind != ExperimentKind::welfare_vs_L) throw ConfigError("saturation curve needs a welfare-vs-L experiment");
  SaturationCurve curve;
  curve.sets = run_experiment(spec);
  curve.rbs = spec.rb_grid;
  for (const auto& set : curve.sets) curve.per_op.push_back(set.per_op_average());
  curve.saturation_rb = saturation_point(curve.rbs, curve.per_op, tolerance);
  return curve;
}

}  // namespace opshare
