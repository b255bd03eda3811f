#pragma once

// Tabular Q-learning for per-SBS power control. States are 0 (QoS violated)
// and 1 (SINR at or above the threshold); actions are power-level indices.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "opshare/deployment.hpp"
#include "opshare/network_config.hpp"
#include "opshare/power_pmf.hpp"

namespace opshare {

class QTable {
 public:
  QTable(std::size_t states, std::size_t actions);

  std::size_t states() const { return states_; }
  std::size_t actions() const { return actions_; }
  double value(std::size_t s, std::size_t a) const { return q_.at(index(s, a)); }
  void set_value(std::size_t s, std::size_t a, double v) { q_.at(index(s, a)) = v; }
  std::size_t visits(std::size_t s, std::size_t a) const { return visits_.at(index(s, a)); }

  /// Lowest action index among the maximizers of Q[s][.].
  std::size_t greedy_action(std::size_t s) const;
  double max_value(std::size_t s) const;
  /// max over a' != a; equals max_value when there is a single action.
  double max_value_excluding(std::size_t s, std::size_t a) const;

  /// Applies Q <- (1 - beta) Q + beta (reward + gamma max Q[s_next]).
  void update(std::size_t s, std::size_t a, double reward, std::size_t s_next, const QLearningParams& params);

  nlohmann::json to_json() const;
  static QTable from_json(const nlohmann::json& j);

  bool operator==(const QTable&) const = default;

 private:
  std::size_t index(std::size_t s, std::size_t a) const;

  std::size_t states_;
  std::size_t actions_;
  std::vector<double> q_;
  std::vector<std::size_t> visits_;
};

/// Epsilon-greedy (ties to the lowest level) or, when a Boltzmann temperature
/// is configured, softmax sampling of Q[s][.] / T_p.
std::size_t select_action(const QTable& q, std::size_t s, const QLearningParams& params, std::mt19937_64& rng);

/// Free-function form of QTable::update.
void q_update(QTable& q, std::size_t s, std::size_t a, double reward, std::size_t s_next,
              const QLearningParams& params);

/// Distribution select_action draws from at the current Q.
PowerPmf policy_distribution(const QTable& q, std::size_t s, const QLearningParams& params);

struct Observation {
  std::size_t state = 0;
  /// log(1 + SINR) in nats when the threshold is met, else 0.
  double reward = 0.0;
  double sinr = 0.0;
};

Observation observe_sinr(double sinr, double threshold);

/// The learning problem of one SBS: its serving link and the co-channel
/// interferers it hears on the RB it uses during the epoch.
struct LearningEnv {
  std::size_t target = 0;
  std::vector<std::size_t> interferers;
  double direct_gain = 0.0;
  /// Large-scale gain from each interferer to the target's UE.
  std::vector<double> interferer_gain;
  double noise_power_w = 0.0;
  double sinr_threshold = 1.0;

  static LearningEnv from_links(const NetworkConfig& cfg, const LinkBudget& links, std::size_t target,
                                std::vector<std::size_t> interferers);

  /// fading[0] is the serving link, fading[i + 1] the i-th interferer.
  double sinr(double own_power_w, std::span<const double> interferer_power_w, std::span<const double> fading) const;
};

/// State and reward for the given powers and small-scale fading draws.
Observation observe(const LearningEnv& env, double own_power_w, std::span<const double> interferer_power_w,
                    std::span<const double> fading);

/// Same, using the fading stored in the deployment and a power per SBS id.
Observation observe(const LearningEnv& env, const Deployment& dep, std::span<const double> power_of_sbs);

/// One SBS's learner: Q-table, current state, and action counts over the
/// current frequency window.
class PowerLearner {
 public:
  PowerLearner(std::size_t levels, QLearningParams params);

  std::size_t act(std::mt19937_64& rng);
  /// Records the action, updates Q towards the observation, moves to its state.
  void learn(std::size_t action, const Observation& obs);
  /// Clears the action counts; the pmf is estimated from actions after this call.
  void start_window();
  /// Empirical frequencies over the window, or the exploration policy at the
  /// current state, depending on params.pmf_estimate. Falls back to the policy
  /// when the window is empty.
  PowerPmf pmf() const;

  const QTable& table() const { return q_; }
  std::size_t state() const { return state_; }

 private:
  QLearningParams params_;
  QTable q_;
  std::size_t state_ = 0;
  std::vector<std::size_t> counts_;
};

struct LearnedPower {
  PowerPmf pmf;
  QTable table;
};

/// Single-SBS learning against interferers that draw their powers from fixed
/// pmfs, with fresh Rayleigh fading each step. The pmf covers the trailing
/// params.pmf_window steps, or the second half of the run when the window is 0.
LearnedPower learn_pmf(const LearningEnv& env, std::span<const PowerPmf> interferer_pmfs, std::size_t steps,
                       const NetworkConfig& cfg, std::uint64_t seed);

/// Explicit finite MDP: transition[s][a][v] and mean reward reward[s][a].
struct ExplicitMdp {
  std::vector<std::vector<std::vector<double>>> transition;
  std::vector<std::vector<double>> reward;
  double discount = 0.9;

  std::size_t states() const { return reward.size(); }
  std::size_t actions() const { return reward.empty() ? 0 : reward.front().size(); }
  void validate() const;
};

using QMatrix = std::vector<std::vector<double>>;

/// H_Q(s, a) = W(s, a) + gamma sum_v P_{s,v}(a) max_b Q(v, b).
QMatrix apply_bellman(const ExplicitMdp& mdp, const QMatrix& q);

/// Fixed point of apply_bellman to 1e-10 in sup norm. Throws
/// std::domain_error when the discount is not below 1.
QMatrix value_iteration_oracle(const ExplicitMdp& mdp, double tolerance = 1e-10);

/// Runs Q-learning on the MDP with deterministic rewards W(s, a), starting in
/// state 0, with the discount taken from the MDP.
QTable learn_on_mdp(const ExplicitMdp& mdp, const QLearningParams& params, std::size_t steps, std::uint64_t seed);

double sup_distance(const QTable& q, const QMatrix& reference);
double sup_distance(const QMatrix& a, const QMatrix& b);

/// Rewards uniform on [0, 1]; transition rows bounded away from 0 and made of
/// multiples of 2^-30, so each row sums to exactly 1.
ExplicitMdp random_mdp(std::size_t states, std::size_t actions, double discount, std::mt19937_64& rng);

}  // namespace opshare
