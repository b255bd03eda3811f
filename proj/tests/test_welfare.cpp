#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "opshare/swap_search.hpp"
#include "opshare/tools/instances.hpp"
#include "opshare/welfare.hpp"

namespace opshare {
namespace {

// Child rates 10 alone, 6 when shared, 3 with three occupants.
RateTable toy_rates(std::size_t parents, std::vector<std::size_t> demand, std::vector<double> weights = {}) {
  if (weights.empty()) weights.assign(parents, 1.0);
  return RateTable::from_child_rates(std::vector<std::vector<double>>(parents, {10.0, 6.0, 3.0}), weights,
                                     std::move(demand));
}

Matching make(const std::vector<std::size_t>& demand, std::vector<std::size_t> supply,
              std::vector<std::optional<RbId>> assignment) {
  return Matching::from_assignment(build_augmented(demand), std::move(supply), assignment);
}

TEST(Utility, SiblingsOnOneRbScoreZero) {
  const std::vector<std::size_t> c{2};
  const auto rates = toy_rates(1, c);
  const Matching m = make(c, {2, 2}, {RbId{0}, RbId{0}});
  EXPECT_EQ(utility(ChildId{0}, m, rates), 0.0);
  EXPECT_EQ(utility(ChildId{1}, m, rates), 0.0);
  EXPECT_GT(desirability(ChildId{0}, m, rates), 0.0);
}

TEST(Utility, SoleAndSharedOccupancy) {
  const std::vector<std::size_t> c{1, 1};
  const auto rates = toy_rates(2, c);
  const Matching alone = make(c, {2, 2}, {RbId{0}, RbId{1}});
  const Matching shared = make(c, {2, 2}, {RbId{0}, RbId{0}});
  EXPECT_EQ(utility(ChildId{0}, alone, rates), 10.0);
  EXPECT_GT(utility(ChildId{0}, shared, rates), 0.0);
  EXPECT_LT(utility(ChildId{0}, shared, rates), utility(ChildId{0}, alone, rates));
  Matching partial(build_augmented(c), {2, 2});
  EXPECT_EQ(utility(ChildId{0}, partial, rates), 0.0);
}

TEST(Utility, AnalyticRatesOrderSoleAboveShared) {
  const NetworkConfig cfg = make_network(2, 2, {1, 1}, 2);
  const auto rates = RateTable::homogeneous(cfg, PowerPmf::degenerate(cfg.power_levels, cfg.power_levels - 1));
  const std::vector<std::size_t> c{1, 1};
  const Matching alone = make(c, {2, 2}, {RbId{0}, RbId{1}});
  const Matching shared = make(c, {2, 2}, {RbId{0}, RbId{0}});
  const double isolated = cfg.expected_sbs_per_operator() *
                          expected_rate_deconditioned(cfg.sbs_intensity, cfg.max_power_w,
                                                      PowerPmf::degenerate(5, 4), cfg);
  EXPECT_NEAR(utility(ChildId{0}, alone, rates), isolated, 1e-12 * isolated);
  EXPECT_LT(utility(ChildId{0}, shared, rates), isolated);
}

TEST(SocialWelfare, EmptyMatchingIsZero) {
  const std::vector<std::size_t> c{1, 2};
  const auto rates = toy_rates(2, c);
  const Matching m(build_augmented(c), {2, 2});
  const auto report = social_welfare(m, rates);
  EXPECT_EQ(report.social_welfare, 0.0);
  EXPECT_EQ(report.potential, 0.0);
  EXPECT_EQ(potential(m, rates), 0.0);
}

TEST(SocialWelfare, HandComputed) {
  const std::vector<std::size_t> c{2, 1};
  const auto rates = toy_rates(2, c, {2.0, 1.0});
  // Parent 0 on RBs 0 and 1, parent 1 shares RB 1.
  const Matching m = make(c, {2, 2}, {RbId{0}, RbId{1}, RbId{1}});
  const auto report = social_welfare(m, rates);
  EXPECT_DOUBLE_EQ(report.parent_rates[0], 2.0 * (10.0 + 6.0) / 2.0);
  EXPECT_DOUBLE_EQ(report.parent_rates[1], 6.0);
  EXPECT_DOUBLE_EQ(report.social_welfare, 22.0);
  EXPECT_DOUBLE_EQ(report.potential, 2.0 * 10.0 / 2 + 2.0 * 6.0 / 2 + 6.0);
  EXPECT_DOUBLE_EQ(report.potential, potential(m, rates));
  EXPECT_EQ(report.indicator, (std::vector<int>{1, 1, 1}));
}

TEST(SocialWelfare, DoubledWeightsDoubleWelfareSameArgmax) {
  const std::vector<std::size_t> c{2, 1};
  const std::vector<std::size_t> b{1, 2, 1};
  const auto base = toy_rates(2, c, {1.0, 1.5});
  const auto doubled = toy_rates(2, c, {2.0, 3.0});
  const auto all = enumerate_matchings(build_augmented(c), b);
  for (const auto& m : all)
    EXPECT_DOUBLE_EQ(social_welfare(m, doubled).social_welfare, 2.0 * social_welfare(m, base).social_welfare);
  const auto a = maximize(all, base, Objective::social_welfare);
  const auto d = maximize(all, doubled, Objective::social_welfare);
  EXPECT_EQ(a.matchings, d.matchings);
}

TEST(SocialWelfare, TwoOperatorsPreferOrthogonal) {
  const std::vector<std::size_t> c{1, 1};
  const auto rates = toy_rates(2, c);
  const auto all = enumerate_matchings(build_augmented(c), std::vector<std::size_t>{1, 1});
  const auto best = maximize(all, rates, Objective::social_welfare);
  for (const auto& m : best.matchings) EXPECT_NE(m.rb_of(ChildId{0}), m.rb_of(ChildId{1}));
  EXPECT_THROW(maximize({}, rates, Objective::potential), std::invalid_argument);
}

TEST(BeneficialSwap, SeparatingSiblings) {
  const std::vector<std::size_t> c{2};
  const auto rates = toy_rates(1, c);
  const Matching m = make(c, {2, 2}, {RbId{0}, RbId{0}});
  const SwapMove move{ChildId{1}, Hole{RbId{1}}};
  EXPECT_TRUE(is_beneficial_swap(m, move, rates));
  EXPECT_GT(potential_delta(m, move, rates), 0.0);
}

TEST(BeneficialSwap, SymmetricRbsGiveNoGain) {
  const std::vector<std::size_t> c{1, 1, 1, 1};
  const auto rates = toy_rates(4, c);
  // Two RBs each holding two children of different parents.
  const Matching m = make(c, {2, 2}, {RbId{0}, RbId{0}, RbId{1}, RbId{1}});
  EXPECT_FALSE(is_beneficial_swap(m, {ChildId{0}, ChildId{2}}, rates));
  EXPECT_FALSE(is_beneficial_swap(m, {ChildId{0}, ChildId{1}}, rates));  // same RB
  EXPECT_EQ(potential_delta(m, {ChildId{0}, ChildId{1}}, rates), 0.0);
}

// Definition-level oracle: recompute every utility of both matchings from the
// raw assignment vectors.
double oracle_utility(const std::vector<std::optional<RbId>>& a, const std::vector<std::size_t>& parent,
                      std::size_t c, const RateTable& rates) {
  if (!a[c]) return 0.0;
  std::size_t occ = 0;
  for (std::size_t o = 0; o < a.size(); ++o) {
    if (a[o] != a[c]) continue;
    ++occ;
    if (o != c && parent[o] == parent[c]) return 0.0;
  }
  return rates.weight(parent[c]) * rates.child_rate(parent[c], occ) / static_cast<double>(rates.demand(parent[c]));
}

bool oracle_beneficial(const Matching& m, const SwapMove& move, const RateTable& rates) {
  auto before = m.assignment();
  auto after = before;
  const auto& parent = m.ops().parent_of;
  const auto from = before[move.child.value];
  std::optional<RbId> to;
  std::optional<std::size_t> partner;
  if (const auto* hole = std::get_if<Hole>(&move.partner)) {
    to = hole->rb;
  } else {
    partner = std::get<ChildId>(move.partner).value;
    to = before[*partner];
    after[*partner] = from;
  }
  if (from == to) return false;
  after[move.child.value] = to;
  bool strict = false;
  for (std::size_t c = 0; c < before.size(); ++c) {
    if (before[c] != from && before[c] != to) continue;
    const double u0 = oracle_utility(before, parent, c, rates);
    const double u1 = oracle_utility(after, parent, c, rates);
    if (u1 < u0) return false;
    if ((c == move.child.value || c == partner) && u1 > u0) strict = true;
  }
  return strict;
}

TEST(BeneficialSwap, AgreesWithDefinitionOracle) {
  std::mt19937_64 rng(123);
  std::size_t beneficial = 0;
  for (int i = 0; i < 150; ++i) {
    const auto inst = tools::random_instance(rng);
    const Matching m = random_initial_matching(inst.ops, inst.supply, rng);
    for (const auto& move : enumerate_swaps(m)) {
      const bool b = is_beneficial_swap(m, move, inst.rates);
      ASSERT_EQ(b, oracle_beneficial(m, move, inst.rates));
      if (b) {
        ++beneficial;
        EXPECT_GT(potential_delta(m, move, inst.rates), 0.0);
      }
      const double delta = potential(apply_swap(m, move), inst.rates) - potential(m, inst.rates);
      EXPECT_NEAR(potential_delta(m, move, inst.rates), delta, 1e-9 * std::max(1.0, std::abs(delta)));
    }
  }
  EXPECT_GT(beneficial, 20u);
}

TEST(PairwiseStable, OrthogonalIsStable) {
  const std::vector<std::size_t> c{1, 2};
  const auto rates = toy_rates(2, c);
  const Matching m = make(c, {1, 1, 1, 1}, {RbId{0}, RbId{1}, RbId{2}});
  EXPECT_TRUE(is_pairwise_stable(m, rates).stable);
}

TEST(PairwiseStable, CollidingSiblingsGiveWitness) {
  const std::vector<std::size_t> c{2, 1};
  const auto rates = toy_rates(2, c);
  const Matching m = make(c, {2, 1, 1}, {RbId{0}, RbId{0}, RbId{1}});
  const auto report = is_pairwise_stable(m, rates);
  ASSERT_FALSE(report.stable);
  ASSERT_TRUE(report.witness);
  const Matching after = apply_swap(m, *report.witness);
  EXPECT_TRUE(sibling_distinct(after));
  EXPECT_FALSE(sibling_distinct(m));
}

TEST(Maximize, TiesSortedLexicographically) {
  const std::vector<std::size_t> c{1, 1};
  const auto rates = toy_rates(2, c);
  const auto all = enumerate_matchings(build_augmented(c), std::vector<std::size_t>{1, 1});
  const auto best = maximize(all, rates, Objective::potential);
  ASSERT_EQ(best.matchings.size(), 2u);
  EXPECT_LT(best.matchings[0], best.matchings[1]);
  EXPECT_DOUBLE_EQ(best.value, 20.0);
}

}  // namespace
}  // namespace opshare
