#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "opshare/deployment.hpp"
#include "opshare/qlearning.hpp"

namespace opshare {
namespace {

QLearningParams constant_rate(double beta, double gamma) {
  QLearningParams p;
  p.rate = {LearningRate::Kind::constant, beta};
  p.discount = gamma;
  return p;
}

// One state, two actions: action 1 pays 1, action 0 pays 0.
ExplicitMdp two_armed(double gamma) {
  ExplicitMdp mdp;
  mdp.transition = {{{1.0}, {1.0}}};
  mdp.reward = {{0.0, 1.0}};
  mdp.discount = gamma;
  return mdp;
}

TEST(QUpdate, ZeroRateLeavesTableUnchanged) {
  QTable q(2, 3);
  q.set_value(0, 1, 4.0);
  q.set_value(1, 2, 7.0);
  const QTable before = q;
  q_update(q, 0, 1, 5.0, 1, constant_rate(0.0, 0.9));
  EXPECT_EQ(q.value(0, 1), 4.0);
  EXPECT_EQ(q.visits(0, 1), 1u);
  EXPECT_EQ(q.value(1, 2), before.value(1, 2));
}

TEST(QUpdate, UnitRateNoDiscountStoresReward) {
  QTable q(2, 3);
  q.set_value(0, 0, 9.0);
  q_update(q, 0, 0, 2.5, 1, constant_rate(1.0, 0.0));
  EXPECT_EQ(q.value(0, 0), 2.5);
}

TEST(QUpdate, BootstrapsFromNextState) {
  QTable q(2, 2);
  q.set_value(1, 0, 3.0);
  q.set_value(1, 1, 5.0);
  q_update(q, 0, 1, 1.0, 1, constant_rate(0.5, 0.5));
  EXPECT_DOUBLE_EQ(q.value(0, 1), 0.5 * (1.0 + 0.5 * 5.0));

  QLearningParams exclude = constant_rate(1.0, 0.5);
  exclude.max_operator = MaxOperator::exclude_taken;
  QTable r(2, 2);
  r.set_value(1, 0, 3.0);
  r.set_value(1, 1, 5.0);
  q_update(r, 1, 1, 1.0, 1, exclude);  // excludes action 1 in the next state
  EXPECT_DOUBLE_EQ(r.value(1, 1), 1.0 + 0.5 * 3.0);
}

TEST(QUpdate, HarmonicRateAveragesTargets) {
  QLearningParams p;
  p.rate.kind = LearningRate::Kind::harmonic;
  p.discount = 0.0;
  QTable q(1, 1);
  for (double r : {2.0, 4.0, 9.0}) q_update(q, 0, 0, r, 0, p);
  EXPECT_DOUBLE_EQ(q.value(0, 0), 5.0);
  EXPECT_EQ(q.visits(0, 0), 3u);
}

TEST(QUpdate, SingleStateFixedPoint) {
  QLearningParams p = constant_rate(1.0, 0.95);
  QTable q(1, 2);
  for (int i = 0; i < 2000; ++i) {
    q_update(q, 0, 1, 1.0, 0, p);
    q_update(q, 0, 0, 0.0, 0, p);
  }
  EXPECT_NEAR(q.value(0, 1), 20.0, 1e-9);
  EXPECT_NEAR(q.value(0, 0), 19.0, 1e-9);

  // The harmonic schedule approaches the same limit from below, slowly.
  QLearningParams h;
  h.rate.kind = LearningRate::Kind::harmonic;
  h.discount = 0.95;
  QTable slow(1, 2);
  double last = 0.0;
  for (int i = 0; i < 10000; ++i) {
    q_update(slow, 0, 1, 1.0, 0, h);
    ASSERT_GE(slow.value(0, 1), last);
    last = slow.value(0, 1);
  }
  EXPECT_LT(last, 20.0);
  EXPECT_GT(last, 5.0);
}

TEST(ValueIteration, Oracles) {
  const QMatrix q = value_iteration_oracle(two_armed(0.95));
  EXPECT_NEAR(q[0][1], 20.0, 1e-8);
  EXPECT_NEAR(q[0][0], 19.0, 1e-8);

  std::mt19937_64 rng(1);
  ExplicitMdp mdp = random_mdp(3, 3, 0.0, rng);
  EXPECT_EQ(value_iteration_oracle(mdp), mdp.reward);

  mdp.discount = 1.0;
  EXPECT_THROW(value_iteration_oracle(mdp), std::domain_error);
}

TEST(ValueIteration, FixedPointOfBellman) {
  std::mt19937_64 rng(2);
  const ExplicitMdp mdp = random_mdp(3, 4, 0.9, rng);
  mdp.validate();
  const QMatrix q = value_iteration_oracle(mdp);
  EXPECT_LT(sup_distance(apply_bellman(mdp, q), q), 1e-9);
}

TEST(ExplicitMdp, ValidationCatchesBadRows) {
  ExplicitMdp mdp = two_armed(0.5);
  mdp.transition[0][1] = {0.7};
  EXPECT_THROW(mdp.validate(), std::invalid_argument);
}

TEST(LearnOnMdp, ConvergesToOracle) {
  std::mt19937_64 rng(3);
  const ExplicitMdp mdp = random_mdp(3, 3, 0.05, rng);
  QLearningParams p;
  p.rate.kind = LearningRate::Kind::harmonic;
  p.epsilon = 0.2;
  const QTable q = learn_on_mdp(mdp, p, 100000, 17);
  EXPECT_LT(sup_distance(q, value_iteration_oracle(mdp)), 1e-3);
}

TEST(Contraction, BellmanShrinksDistances) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 50; ++i) {
    const ExplicitMdp mdp = random_mdp(3, 2, 0.95, rng);
    QMatrix a(3, std::vector<double>(2)), b = a;
    for (auto* m : {&a, &b})
      for (auto& row : *m)
        for (double& v : row) v = u(rng);
    EXPECT_LE(sup_distance(apply_bellman(mdp, a), apply_bellman(mdp, b)),
              0.95 * sup_distance(a, b) * (1.0 + 1e-12));
  }
}

TEST(SelectAction, FullExplorationIsUniform) {
  QTable q(2, 5);
  q.set_value(0, 3, 100.0);
  QLearningParams p;
  p.epsilon = 1.0;
  std::mt19937_64 rng(11);
  std::vector<double> counts(5, 0.0);
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) counts[select_action(q, 0, p, rng)] += 1.0;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - draws / 5.0) * (c - draws / 5.0) / (draws / 5.0);
  EXPECT_LT(chi2, 18.47);  // 4 degrees of freedom, 0.1% level
}

TEST(SelectAction, NoExplorationIsGreedy) {
  QTable q(2, 4);
  q.set_value(1, 2, 0.5);
  QLearningParams p;
  p.epsilon = 0.0;
  std::mt19937_64 rng(12);
  for (int i = 0; i < 500; ++i) EXPECT_EQ(select_action(q, 1, p, rng), 2u);
  // Ties go to the lowest level.
  EXPECT_EQ(select_action(q, 0, p, rng), 0u);
}

TEST(SelectAction, BoltzmannWithEqualValuesIsUniform) {
  QTable q(2, 4);
  for (std::size_t a = 0; a < 4; ++a) q.set_value(0, a, 3.0);
  QLearningParams p;
  p.boltzmann_temperature = 0.7;
  EXPECT_EQ(policy_distribution(q, 0, p), PowerPmf::uniform(4));
  q.set_value(0, 1, 3.0 + 0.7 * std::log(2.0));
  const PowerPmf pmf = policy_distribution(q, 0, p);
  EXPECT_NEAR(pmf[1], 2.0 * pmf[0], 1e-12);
}

TEST(QTable, JsonRoundTrip) {
  QTable q(2, 3);
  q_update(q, 0, 2, 1.25, 1, constant_rate(0.3, 0.9));
  q.set_value(1, 1, -0.1 / 3.0);
  const QTable back = QTable::from_json(nlohmann::json::parse(q.to_json().dump()));
  EXPECT_EQ(back, q);
}

TEST(Observe, RewardAndState) {
  const auto good = observe_sinr(10.0, 2.0);
  EXPECT_EQ(good.state, 1u);
  EXPECT_DOUBLE_EQ(good.reward, std::log1p(10.0));
  const auto bad = observe_sinr(1.0, 2.0);
  EXPECT_EQ(bad.state, 0u);
  EXPECT_EQ(bad.reward, 0.0);

  LearningEnv env;
  env.direct_gain = 1e-4;
  env.noise_power_w = 1e-12;
  env.sinr_threshold = 2.0;
  const std::vector<double> fading{1.0};
  const auto strong = observe(env, 0.01, {}, fading);
  EXPECT_EQ(strong.state, 1u);
  EXPECT_NEAR(strong.reward, std::log1p(1e-6 / 1e-12), 1e-9);
  const auto silent = observe(env, 0.0, {}, fading);
  EXPECT_EQ(silent.state, 0u);
  EXPECT_EQ(silent.reward, 0.0);
}

TEST(Observe, MatchesDeploymentSinr) {
  const NetworkConfig cfg = make_network(2, 1, {1, 1}, 2);
  const Deployment dep = sample_deployment(cfg, 21);
  const std::size_t n = dep.sbs_count();
  ASSERT_GE(n, 3u);
  const LinkBudget links(cfg, dep, ChannelMode::empirical);
  const std::vector<std::size_t> interferers{1, 2};
  const LearningEnv env = LearningEnv::from_links(cfg, links, 0, interferers);
  std::vector<double> power(n);
  for (std::size_t f = 0; f < n; ++f) power[f] = cfg.power_level(f % cfg.power_levels);
  power[0] = cfg.max_power_w;
  std::vector<std::optional<std::size_t>> rb(n);
  rb[0] = rb[1] = rb[2] = 0;
  const double sinr = instantaneous_sinr(cfg, dep, rb, power, 0, ChannelMode::empirical);
  const Observation obs = observe(env, dep, power);
  EXPECT_NEAR(obs.sinr, sinr, 1e-9 * sinr);
  EXPECT_EQ(obs.state, sinr >= cfg.sinr_threshold ? 1u : 0u);
  EXPECT_DOUBLE_EQ(obs.reward, obs.state ? std::log1p(sinr) : 0.0);
}

LearningEnv clean_link(std::size_t target) {
  LearningEnv env;
  env.target = target;
  env.direct_gain = 1e-4;
  env.noise_power_w = 1e-15;
  env.sinr_threshold = 2.0;
  return env;
}

TEST(LearnPmf, DominantActionConcentrates) {
  NetworkConfig cfg = make_network(1, 1, {1}, 1);
  cfg.learning.epsilon = 0.1;
  // Myopic with harmonic steps: each Q entry is the sample-mean reward of its level.
  cfg.learning.rate.kind = LearningRate::Kind::harmonic;
  cfg.learning.discount = 0.0;
  const auto learned = learn_pmf(clean_link(0), {}, 10000, cfg, 4);
  EXPECT_GE(learned.pmf[cfg.power_levels - 1], 0.9);
  EXPECT_EQ(learned.table.greedy_action(1), cfg.power_levels - 1);
}

TEST(LearnPmf, SingleLevelIsDegenerate) {
  NetworkConfig cfg = make_network(1, 1, {1}, 1);
  cfg.power_levels = 1;
  EXPECT_EQ(learn_pmf(clean_link(0), {}, 500, cfg, 1).pmf, PowerPmf::degenerate(1, 0));
}

TEST(LearnPmf, SymmetricLearnersAgree) {
  NetworkConfig cfg = make_network(1, 1, {1}, 2);
  LearningEnv a = clean_link(0);
  LearningEnv b = clean_link(1);
  a.interferers = {1};
  b.interferers = {0};
  a.interferer_gain = b.interferer_gain = {1e-6};
  const std::vector<PowerPmf> other{PowerPmf::uniform(cfg.power_levels)};
  const auto la = learn_pmf(a, other, 3000, cfg, 55);
  const auto lb = learn_pmf(b, other, 3000, cfg, 55);
  EXPECT_EQ(la.pmf, lb.pmf);
  EXPECT_EQ(la.table, lb.table);
  EXPECT_THROW(learn_pmf(a, {}, 10, cfg, 1), std::invalid_argument);
}

TEST(PowerLearner, WindowedFrequencies) {
  QLearningParams p;
  p.epsilon = 0.0;
  PowerLearner learner(3, p);
  learner.learn(2, observe_sinr(10.0, 1.0));
  learner.start_window();
  learner.learn(1, observe_sinr(10.0, 1.0));
  learner.learn(1, observe_sinr(10.0, 1.0));
  learner.learn(0, observe_sinr(0.0, 1.0));
  const PowerPmf pmf = learner.pmf();
  EXPECT_NEAR(pmf[1], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(pmf[0], 1.0 / 3.0, 1e-15);
  EXPECT_EQ(pmf[2], 0.0);
  EXPECT_EQ(learner.state(), 0u);
}

}  // namespace
}  // namespace opshare
