#include "opshare/qlearning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace opshare {

QTable::QTable(std::size_t states, std::size_t actions)
    : states_(states), actions_(actions), q_(states * actions, 0.0), visits_(states * actions, 0) {
  if (states == 0 || actions == 0) throw std::invalid_argument("Q-table needs at least one state and one action");
}

std::size_t QTable::index(std::size_t s, std::size_t a) const {
  if (s >= states_ || a >= actions_) throw std::out_of_range("Q-table index out of range");
  return s * actions_ + a;
}

std::size_t QTable::greedy_action(std::size_t s) const {
  std::size_t best = 0;
  for (std::size_t a = 1; a < actions_; ++a)
    if (value(s, a) > value(s, best)) best = a;
  return best;
}

double QTable::max_value(std::size_t s) const { return value(s, greedy_action(s)); }

double QTable::max_value_excluding(std::size_t s, std::size_t a) const {
  if (actions_ == 1) return max_value(s);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < actions_; ++b)
    if (b != a) best = std::max(best, value(s, b));
  return best;
}

void QTable::update(std::size_t s, std::size_t a, double reward, std::size_t s_next, const QLearningParams& params) {
  const std::size_t i = index(s, a);
  const double beta = params.rate.at(visits_[i]);
  const double next = params.max_operator == MaxOperator::exclude_taken ? max_value_excluding(s_next, a)
                                                                         : max_value(s_next);
  q_[i] = (1.0 - beta) * q_[i] + beta * (reward + params.discount * next);
  ++visits_[i];
}

nlohmann::json QTable::to_json() const {
  nlohmann::json q = nlohmann::json::array();
  nlohmann::json visits = nlohmann::json::array();
  for (std::size_t s = 0; s < states_; ++s) {
    q.push_back(std::vector<double>(q_.begin() + static_cast<std::ptrdiff_t>(s * actions_),
                                    q_.begin() + static_cast<std::ptrdiff_t>((s + 1) * actions_)));
    visits.push_back(std::vector<std::size_t>(visits_.begin() + static_cast<std::ptrdiff_t>(s * actions_),
                                              visits_.begin() + static_cast<std::ptrdiff_t>((s + 1) * actions_)));
  }
  return {{"states", states_}, {"actions", actions_}, {"q", q}, {"visits", visits}};
}

QTable QTable::from_json(const nlohmann::json& j) {
  QTable t(j.at("states").get<std::size_t>(), j.at("actions").get<std::size_t>());
  const auto& q = j.at("q");
  const auto& visits = j.at("visits");
  if (q.size() != t.states_ || visits.size() != t.states_) throw std::invalid_argument("Q-table JSON row count");
  for (std::size_t s = 0; s < t.states_; ++s) {
    if (q[s].size() != t.actions_ || visits[s].size() != t.actions_)
      throw std::invalid_argument("Q-table JSON column count");
    for (std::size_t a = 0; a < t.actions_; ++a) {
      t.q_[t.index(s, a)] = q[s][a].get<double>();
      t.visits_[t.index(s, a)] = visits[s][a].get<std::size_t>();
    }
  }
  return t;
}

namespace {

std::vector<double> boltzmann_weights(const QTable& q, std::size_t s, double temperature) {
  std::vector<double> w(q.actions());
  const double top = q.max_value(s);
  for (std::size_t a = 0; a < w.size(); ++a) w[a] = std::exp((q.value(s, a) - top) / temperature);
  return w;
}

}  // namespace

std::size_t select_action(const QTable& q, std::size_t s, const QLearningParams& params, std::mt19937_64& rng) {
  if (params.boltzmann_temperature) {
    const auto w = boltzmann_weights(q, s, *params.boltzmann_temperature);
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    return pick(rng);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < params.epsilon) {
    std::uniform_int_distribution<std::size_t> any(0, q.actions() - 1);
    return any(rng);
  }
  return q.greedy_action(s);
}

void q_update(QTable& q, std::size_t s, std::size_t a, double reward, std::size_t s_next,
              const QLearningParams& params) {
  q.update(s, a, reward, s_next, params);
}

PowerPmf policy_distribution(const QTable& q, std::size_t s, const QLearningParams& params) {
  if (params.boltzmann_temperature) return PowerPmf::from_weights(boltzmann_weights(q, s, *params.boltzmann_temperature));
  const double n = static_cast<double>(q.actions());
  std::vector<double> p(q.actions(), params.epsilon / n);
  p[q.greedy_action(s)] += 1.0 - params.epsilon;
  return PowerPmf::from_weights(std::move(p));
}

Observation observe_sinr(double sinr, double threshold) {
  if (sinr >= threshold) return {1, std::log1p(sinr), sinr};
  return {0, 0.0, sinr};
}

LearningEnv LearningEnv::from_links(const NetworkConfig& cfg, const LinkBudget& links, std::size_t target,
                                    std::vector<std::size_t> interferers) {
  LearningEnv env;
  env.target = target;
  env.direct_gain = links.gain(target, target);
  for (std::size_t f : interferers) env.interferer_gain.push_back(links.gain(f, target));
  env.interferers = std::move(interferers);
  env.noise_power_w = cfg.noise_power_w;
  env.sinr_threshold = cfg.sinr_threshold;
  return env;
}

double LearningEnv::sinr(double own_power_w, std::span<const double> interferer_power_w,
                         std::span<const double> fading) const {
  if (interferer_power_w.size() != interferers.size() || fading.size() != interferers.size() + 1)
    throw std::invalid_argument("power and fading spans must match the interferer list");
  double interference = 0.0;
  for (std::size_t i = 0; i < interferers.size(); ++i)
    interference += fading[i + 1] * interferer_gain[i] * interferer_power_w[i];
  return fading[0] * direct_gain * own_power_w / (interference + noise_power_w);
}

Observation observe(const LearningEnv& env, double own_power_w, std::span<const double> interferer_power_w,
                    std::span<const double> fading) {
  return observe_sinr(env.sinr(own_power_w, interferer_power_w, fading), env.sinr_threshold);
}

Observation observe(const LearningEnv& env, const Deployment& dep, std::span<const double> power_of_sbs) {
  std::vector<double> powers;
  std::vector<double> fading{dep.fading_gain(env.target, env.target)};
  for (std::size_t f : env.interferers) {
    powers.push_back(power_of_sbs[f]);
    fading.push_back(dep.fading_gain(f, env.target));
  }
  return observe(env, power_of_sbs[env.target], powers, fading);
}

PowerLearner::PowerLearner(std::size_t levels, QLearningParams params)
    : params_(std::move(params)), q_(2, levels), counts_(levels, 0) {}

std::size_t PowerLearner::act(std::mt19937_64& rng) { return select_action(q_, state_, params_, rng); }

void PowerLearner::learn(std::size_t action, const Observation& obs) {
  q_.update(state_, action, obs.reward, obs.state, params_);
  state_ = obs.state;
  ++counts_.at(action);
}

void PowerLearner::start_window() { std::fill(counts_.begin(), counts_.end(), 0); }

PowerPmf PowerLearner::pmf() const {
  const bool empty = std::all_of(counts_.begin(), counts_.end(), [](std::size_t n) { return n == 0; });
  if (params_.pmf_estimate == PmfEstimate::exact_policy || empty) return policy_distribution(q_, state_, params_);
  return PowerPmf::from_weights(std::vector<double>(counts_.begin(), counts_.end()));
}

LearnedPower learn_pmf(const LearningEnv& env, std::span<const PowerPmf> interferer_pmfs, std::size_t steps,
                       const NetworkConfig& cfg, std::uint64_t seed) {
  if (interferer_pmfs.size() != env.interferers.size())
    throw std::invalid_argument("need one pmf per interferer");
  const auto grid = cfg.power_grid();
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> fading_draw(cfg.fading_rate);
  PowerLearner learner(grid.size(), cfg.learning);

  const std::size_t window = cfg.learning.pmf_window == 0 ? steps / 2 : std::min(cfg.learning.pmf_window, steps);
  std::vector<double> powers(env.interferers.size());
  std::vector<double> fading(env.interferers.size() + 1);
  for (std::size_t t = 0; t < steps; ++t) {
    if (t == steps - window) learner.start_window();
    const std::size_t a = learner.act(rng);
    for (std::size_t i = 0; i < powers.size(); ++i) powers[i] = grid[interferer_pmfs[i].sample(rng)];
    for (double& h : fading) h = fading_draw(rng);
    learner.learn(a, observe(env, grid[a], powers, fading));
  }
  return {learner.pmf(), learner.table()};
}

void ExplicitMdp::validate() const {
  if (states() == 0 || actions() == 0) throw std::invalid_argument("MDP needs states and actions");
  if (states() * actions() > 100) throw std::invalid_argument("MDP larger than 100 state-action pairs");
  if (transition.size() != states()) throw std::invalid_argument("transition tensor has wrong state count");
  for (std::size_t s = 0; s < states(); ++s) {
    if (reward[s].size() != actions() || transition[s].size() != actions())
      throw std::invalid_argument("MDP rows have inconsistent action counts");
    for (const auto& row : transition[s]) {
      if (row.size() != states()) throw std::invalid_argument("transition row has wrong length");
      double sum = 0.0;
      for (double p : row) {
        if (p < 0.0) throw std::invalid_argument("negative transition probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("transition row does not sum to 1");
    }
  }
}

QMatrix apply_bellman(const ExplicitMdp& mdp, const QMatrix& q) {
  std::vector<double> best(mdp.states());
  for (std::size_t v = 0; v < mdp.states(); ++v) best[v] = *std::max_element(q[v].begin(), q[v].end());
  QMatrix out(mdp.states(), std::vector<double>(mdp.actions()));
  for (std::size_t s = 0; s < mdp.states(); ++s)
    for (std::size_t a = 0; a < mdp.actions(); ++a) {
      double future = 0.0;
      for (std::size_t v = 0; v < mdp.states(); ++v) future += mdp.transition[s][a][v] * best[v];
      out[s][a] = mdp.reward[s][a] + mdp.discount * future;
    }
  return out;
}

double sup_distance(const QMatrix& a, const QMatrix& b) {
  double d = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s)
    for (std::size_t x = 0; x < a[s].size(); ++x) d = std::max(d, std::abs(a[s][x] - b.at(s).at(x)));
  return d;
}

double sup_distance(const QTable& q, const QMatrix& reference) {
  double d = 0.0;
  for (std::size_t s = 0; s < q.states(); ++s)
    for (std::size_t a = 0; a < q.actions(); ++a) d = std::max(d, std::abs(q.value(s, a) - reference.at(s).at(a)));
  return d;
}

QMatrix value_iteration_oracle(const ExplicitMdp& mdp, double tolerance) {
  if (!(mdp.discount < 1.0)) throw std::domain_error("value iteration needs discount < 1 for a contraction");
  mdp.validate();
  QMatrix q(mdp.states(), std::vector<double>(mdp.actions(), 0.0));
  // Stop once the a-posteriori bound gamma / (1 - gamma) * step is below tolerance.
  for (;;) {
    QMatrix next = apply_bellman(mdp, q);
    const double step = sup_distance(next, q);
    q = std::move(next);
    if (step * mdp.discount <= tolerance * (1.0 - mdp.discount)) break;
  }
  return q;
}

QTable learn_on_mdp(const ExplicitMdp& mdp, const QLearningParams& params, std::size_t steps, std::uint64_t seed) {
  mdp.validate();
  QLearningParams p = params;
  p.discount = mdp.discount;
  QTable q(mdp.states(), mdp.actions());
  std::mt19937_64 rng(seed);
  std::size_t s = 0;
  for (std::size_t t = 0; t < steps; ++t) {
    const std::size_t a = select_action(q, s, p, rng);
    const auto& row = mdp.transition[s][a];
    std::discrete_distribution<std::size_t> next(row.begin(), row.end());
    const std::size_t v = next(rng);
    q.update(s, a, mdp.reward[s][a], v, p);
    s = v;
  }
  return q;
}

ExplicitMdp random_mdp(std::size_t states, std::size_t actions, double discount, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ExplicitMdp mdp;
  mdp.discount = discount;
  mdp.reward.assign(states, std::vector<double>(actions));
  mdp.transition.assign(states, std::vector<std::vector<double>>(actions, std::vector<double>(states)));
  for (std::size_t s = 0; s < states; ++s)
    for (std::size_t a = 0; a < actions; ++a) {
      mdp.reward[s][a] = unit(rng);
      auto& row = mdp.transition[s][a];
      double sum = 0.0;
      for (double& p : row) sum += (p = 0.05 + unit(rng));
      // Dyadic probabilities (multiples of 2^-30) so each row sums to exactly 1.
      constexpr double kGrid = 1073741824.0;
      double rest = 1.0;
      for (std::size_t v = 0; v + 1 < row.size(); ++v) {
        row[v] = std::round(row[v] / sum * kGrid) / kGrid;
        rest -= row[v];
      }
      row.back() = rest;
    }
  return mdp;
}

}  // namespace opshare
