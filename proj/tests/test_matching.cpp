#include <gtest/gtest.h>

#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "opshare/errors.hpp"
#include "opshare/matching.hpp"
#include "opshare/swap_search.hpp"

namespace opshare {
namespace {

TEST(AugmentedOpSet, ChildrenPerDemand) {
  const std::vector<std::size_t> c{2, 3};
  const auto ops = build_augmented(c);
  EXPECT_EQ(ops.child_count(), 5u);
  EXPECT_EQ(ops.parent_of, (std::vector<std::size_t>{0, 0, 1, 1, 1}));
  EXPECT_TRUE(ops.siblings(ChildId{2}, ChildId{4}));
  EXPECT_FALSE(ops.siblings(ChildId{1}, ChildId{2}));
  EXPECT_FALSE(ops.siblings(ChildId{1}, ChildId{1}));

  EXPECT_EQ(build_augmented(std::vector<std::size_t>{1}).child_count(), 1u);
  EXPECT_EQ(build_augmented(std::vector<std::size_t>{4, 4, 4, 4}).child_count(), 16u);
}

TEST(Matching, AssignKeepsBothViewsInSync) {
  const std::vector<std::size_t> c{2, 1};
  Matching m(build_augmented(c), {2, 1});
  m.assign(ChildId{0}, RbId{0});
  m.assign(ChildId{2}, RbId{0});
  m.assign(ChildId{1}, RbId{1});
  EXPECT_TRUE(m.is_consistent());
  EXPECT_TRUE(m.fully_assigned());
  EXPECT_EQ(m.occupancy(RbId{0}), 2u);
  EXPECT_FALSE(m.has_vacancy(RbId{1}));
  EXPECT_THROW(m.assign(ChildId{2}, RbId{1}), ConstraintError);
  EXPECT_THROW(m.assign(ChildId{0}, RbId{5}), ConstraintError);
  EXPECT_EQ(m.parent_matrix(), (std::vector<std::vector<int>>{{1, 1}, {1, 0}}));
  EXPECT_EQ(m.inter_operator_pairs(), 1u);
  m.unassign(ChildId{2});
  EXPECT_FALSE(m.fully_assigned());
  EXPECT_TRUE(m.is_consistent());
  EXPECT_EQ(m.inter_operator_pairs(), 0u);
}

TEST(Matching, SiblingCollision) {
  const std::vector<std::size_t> c{2};
  Matching m(build_augmented(c), {2, 2});
  m.assign(ChildId{0}, RbId{0});
  m.assign(ChildId{1}, RbId{0});
  EXPECT_TRUE(m.has_sibling_collision(ChildId{0}));
  EXPECT_EQ(m.rbs_of_parent(0).size(), 1u);
}

TEST(Matching, FromAssignmentRejectsOverfill) {
  const std::vector<std::size_t> c{1, 1};
  const std::vector<std::optional<RbId>> both{RbId{0}, RbId{0}};
  EXPECT_THROW(Matching::from_assignment(build_augmented(c), {1, 1}, both), ConstraintError);
  const std::vector<std::optional<RbId>> short_list{RbId{0}};
  EXPECT_THROW(Matching::from_assignment(build_augmented(c), {1, 1}, short_list), ConstraintError);
}

TEST(ApplySwap, InvolutionAndIdentity) {
  const std::vector<std::size_t> c{2, 2};
  std::mt19937_64 rng(9);
  const Matching m = random_initial_matching(build_augmented(c), {2, 1, 1}, rng);
  for (const auto& move : enumerate_swaps(m)) {
    const Matching swapped = apply_swap(m, move);
    EXPECT_TRUE(swapped.is_consistent());
    if (const auto* other = std::get_if<ChildId>(&move.partner)) {
      EXPECT_EQ(apply_swap(swapped, move.child, *other), m);
    } else {
      const auto back = Hole{*m.rb_of(move.child)};
      EXPECT_EQ(apply_swap(swapped, move.child, back), m);
    }
  }
  // Two children on the same RB: nothing changes.
  for (std::size_t a = 0; a < m.child_count(); ++a)
    for (std::size_t b = 0; b < m.child_count(); ++b)
      if (a != b && m.rb_of(ChildId{a}) == m.rb_of(ChildId{b})) {
        EXPECT_EQ(apply_swap(m, ChildId{a}, ChildId{b}), m);
      }
}

TEST(ApplySwap, HoleMoveRelocates) {
  const std::vector<std::size_t> c{1, 1};
  Matching m(build_augmented(c), {2, 1});
  m.assign(ChildId{0}, RbId{0});
  m.assign(ChildId{1}, RbId{1});
  const Matching moved = apply_swap(m, ChildId{1}, Hole{RbId{0}});
  EXPECT_EQ(moved.rb_of(ChildId{1}), RbId{0});
  EXPECT_EQ(moved.occupancy(RbId{1}), 0u);
  EXPECT_THROW(apply_swap(moved, ChildId{1}, Hole{RbId{7}}), ConstraintError);
  EXPECT_THROW(apply_swap(m, ChildId{0}, Hole{RbId{1}}), ConstraintError);
}

TEST(EnumerateSwaps, CountsExchangesAndHoles) {
  const std::vector<std::size_t> c{1, 1};
  Matching m(build_augmented(c), {1, 1, 1});
  m.assign(ChildId{0}, RbId{0});
  m.assign(ChildId{1}, RbId{1});
  // One exchange plus each child into the free RB 2.
  EXPECT_EQ(enumerate_swaps(m).size(), 3u);
}

TEST(EnumerateMatchings, CountAgreesWithList) {
  const std::vector<std::size_t> c{2, 1};
  const std::vector<std::size_t> b{2, 1, 1};
  const auto all = enumerate_matchings(build_augmented(c), b);
  EXPECT_EQ(static_cast<double>(all.size()), count_matchings(3, b));
  EXPECT_TRUE(std::is_sorted(all.begin(), all.end()));
  const std::vector<std::size_t> two{2, 2};
  EXPECT_EQ(count_matchings(2, two), 4.0);
  const std::vector<std::size_t> one{1};
  EXPECT_EQ(count_matchings(1, one), 1.0);
  EXPECT_GT(count_matchings(16, std::vector<std::size_t>(16, 4)), 1e6);
}

TEST(MatchingJson, RoundTrip) {
  const std::vector<std::size_t> c{1, 2};
  Matching m(build_augmented(c), {2, 2});
  m.assign(ChildId{0}, RbId{1});
  m.assign(ChildId{2}, RbId{0});
  const auto j = matching_to_json(m, 1.5, 2.5);
  const auto rec = matching_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(rec.assignment, m.assignment());
  EXPECT_EQ(rec.welfare, 1.5);
  EXPECT_EQ(rec.potential, 2.5);
}

TEST(RandomInitialMatching, RespectsSupply) {
  const std::vector<std::size_t> c{2, 2, 2};
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Matching m = random_initial_matching(build_augmented(c), {2, 2, 2}, rng);
    EXPECT_TRUE(m.fully_assigned());
    EXPECT_TRUE(m.is_consistent());
  }
  EXPECT_THROW(random_initial_matching(build_augmented(c), {1, 1}, rng), ConstraintError);
}

}  // namespace
}  // namespace opshare
