#include "opshare/matching.hpp"

#include <algorithm>
#include <string>

#include <nlohmann/json.hpp>

#include "opshare/errors.hpp"

namespace opshare {

AugmentedOpSet build_augmented(std::span<const std::size_t> demand) {
  AugmentedOpSet ops;
  ops.children_of.resize(demand.size());
  for (std::size_t k = 0; k < demand.size(); ++k) {
    for (std::size_t i = 0; i < demand[k]; ++i) {
      ops.children_of[k].push_back(ChildId{ops.parent_of.size()});
      ops.parent_of.push_back(k);
    }
  }
  return ops;
}

AugmentedOpSet build_augmented(const NetworkConfig& cfg) { return build_augmented(cfg.demand); }

Matching::Matching(AugmentedOpSet ops, std::vector<std::size_t> supply)
    : ops_(std::move(ops)),
      supply_(std::move(supply)),
      rb_of_(ops_.child_count()),
      occupants_(supply_.size()) {}

Matching Matching::from_assignment(AugmentedOpSet ops, std::vector<std::size_t> supply,
                                   std::span<const std::optional<RbId>> rb_of_child) {
  Matching m(std::move(ops), std::move(supply));
  if (rb_of_child.size() != m.child_count()) throw ConstraintError("assignment must list every child");
  for (std::size_t c = 0; c < rb_of_child.size(); ++c)
    if (rb_of_child[c]) m.assign(ChildId{c}, *rb_of_child[c]);
  return m;
}

bool Matching::fully_assigned() const {
  return std::all_of(rb_of_.begin(), rb_of_.end(), [](const auto& rb) { return rb.has_value(); });
}

void Matching::assign(ChildId c, RbId rb) {
  if (c.value >= rb_of_.size()) throw ConstraintError("unknown child " + std::to_string(c.value));
  if (rb.value >= occupants_.size()) throw ConstraintError("unknown RB " + std::to_string(rb.value));
  if (rb_of_[c.value] == rb) return;
  if (!has_vacancy(rb))
    throw ConstraintError("RB " + std::to_string(rb.value) + " is full (supply " +
                          std::to_string(capacity(rb)) + ")");
  unassign(c);
  rb_of_[c.value] = rb;
  auto& occ = occupants_[rb.value];
  occ.insert(std::upper_bound(occ.begin(), occ.end(), c), c);
}

void Matching::unassign(ChildId c) {
  auto& slot = rb_of_.at(c.value);
  if (!slot) return;
  auto& occ = occupants_[slot->value];
  occ.erase(std::find(occ.begin(), occ.end(), c));
  slot.reset();
}

bool Matching::has_sibling_collision(ChildId c) const {
  const auto rb = rb_of(c);
  if (!rb) return false;
  const auto occ = occupants(*rb);
  return std::any_of(occ.begin(), occ.end(), [&](ChildId o) { return ops_.siblings(c, o); });
}

std::vector<RbId> Matching::rbs_of_parent(std::size_t parent) const {
  std::vector<RbId> rbs;
  for (ChildId c : ops_.children_of.at(parent))
    if (auto rb = rb_of(c)) rbs.push_back(*rb);
  std::sort(rbs.begin(), rbs.end());
  rbs.erase(std::unique(rbs.begin(), rbs.end()), rbs.end());
  return rbs;
}

std::vector<std::vector<int>> Matching::parent_matrix() const {
  std::vector<std::vector<int>> x(rb_count(), std::vector<int>(ops_.parent_count(), 0));
  for (std::size_t c = 0; c < rb_of_.size(); ++c)
    if (rb_of_[c]) x[rb_of_[c]->value][ops_.parent_of[c]] = 1;
  return x;
}

std::size_t Matching::inter_operator_pairs() const {
  std::size_t pairs = 0;
  for (const auto& occ : occupants_)
    for (std::size_t i = 0; i < occ.size(); ++i)
      for (std::size_t j = i + 1; j < occ.size(); ++j)
        if (ops_.parent(occ[i]) != ops_.parent(occ[j])) ++pairs;
  return pairs;
}

bool Matching::is_consistent() const {
  std::size_t listed = 0;
  for (std::size_t l = 0; l < occupants_.size(); ++l) {
    if (occupants_[l].size() > supply_[l]) return false;
    for (ChildId c : occupants_[l])
      if (c.value >= rb_of_.size() || rb_of_[c.value] != RbId{l}) return false;
    listed += occupants_[l].size();
  }
  const auto assigned = static_cast<std::size_t>(
      std::count_if(rb_of_.begin(), rb_of_.end(), [](const auto& rb) { return rb.has_value(); }));
  if (assigned != listed) return false;
  // C2: a parent cannot hold more RBs than it has children, i.e. than it demanded.
  for (std::size_t k = 0; k < ops_.parent_count(); ++k)
    if (rbs_of_parent(k).size() > ops_.children_of[k].size()) return false;
  return true;
}

std::strong_ordering Matching::operator<=>(const Matching& other) const {
  const auto key = [](const std::optional<RbId>& rb) { return rb ? rb->value + 1 : 0; };
  return std::lexicographical_compare_three_way(
      rb_of_.begin(), rb_of_.end(), other.rb_of_.begin(), other.rb_of_.end(),
      [&](const auto& a, const auto& b) { return key(a) <=> key(b); });
}

Matching apply_swap(const Matching& m, ChildId child, SwapPartner partner) {
  Matching out = m;
  const auto from = m.rb_of(child);
  if (!from) throw ConstraintError("swap needs an assigned child");
  if (const auto* hole = std::get_if<Hole>(&partner)) {
    if (hole->rb.value >= m.rb_count()) throw ConstraintError("hole on unknown RB");
    if (hole->rb == *from) return out;
    if (!m.has_vacancy(hole->rb)) throw ConstraintError("hole target RB has no vacancy");
    out.assign(child, hole->rb);
    return out;
  }
  const ChildId other = std::get<ChildId>(partner);
  const auto to = m.rb_of(other);
  if (!to) throw ConstraintError("swap partner is unassigned");
  if (*to == *from) return out;
  out.unassign(child);
  out.unassign(other);
  out.assign(child, *to);
  out.assign(other, *from);
  return out;
}

std::vector<SwapMove> enumerate_swaps(const Matching& m) {
  std::vector<SwapMove> moves;
  const std::size_t n = m.child_count();
  for (std::size_t a = 0; a < n; ++a) {
    const auto ra = m.rb_of(ChildId{a});
    if (!ra) continue;
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto rb = m.rb_of(ChildId{b});
      if (rb && *rb != *ra) moves.push_back({ChildId{a}, ChildId{b}});
    }
    for (std::size_t l = 0; l < m.rb_count(); ++l)
      if (RbId{l} != *ra && m.has_vacancy(RbId{l})) moves.push_back({ChildId{a}, Hole{RbId{l}}});
  }
  return moves;
}

double count_matchings(std::size_t children, std::span<const std::size_t> supply) {
  // ways[m]: labeled assignments of m chosen children to the RBs seen so far.
  std::vector<double> ways(children + 1, 0.0);
  ways[0] = 1.0;
  std::vector<double> binom_row(children + 1);
  for (std::size_t cap : supply) {
    std::vector<double> next(children + 1, 0.0);
    for (std::size_t m = 0; m <= children; ++m) {
      double binom = 1.0;  // C(m, t)
      for (std::size_t t = 0; t <= std::min(cap, m); ++t) {
        next[m] += binom * ways[m - t];
        binom = binom * static_cast<double>(m - t) / static_cast<double>(t + 1);
      }
    }
    ways = std::move(next);
  }
  return ways[children];
}

std::vector<Matching> enumerate_matchings(const AugmentedOpSet& ops, std::span<const std::size_t> supply) {
  std::vector<Matching> out;
  Matching current(ops, {supply.begin(), supply.end()});
  const std::size_t n = ops.child_count();
  auto recurse = [&](auto& self, std::size_t c) -> void {
    if (c == n) {
      out.push_back(current);
      return;
    }
    for (std::size_t l = 0; l < supply.size(); ++l) {
      if (!current.has_vacancy(RbId{l})) continue;
      current.assign(ChildId{c}, RbId{l});
      self(self, c + 1);
      current.unassign(ChildId{c});
    }
  };
  recurse(recurse, 0);
  return out;
}

nlohmann::json matching_to_json(const Matching& m, double welfare, double potential) {
  nlohmann::json assignment = nlohmann::json::array();
  for (std::size_t c = 0; c < m.child_count(); ++c) {
    const auto rb = m.rb_of(ChildId{c});
    assignment.push_back({c, rb ? static_cast<long long>(rb->value) : -1LL});
  }
  return {{"assignment", assignment}, {"welfare", welfare}, {"potential", potential}};
}

MatchingRecord matching_from_json(const nlohmann::json& j) {
  MatchingRecord rec;
  const auto& assignment = j.at("assignment");
  rec.assignment.resize(assignment.size());
  for (const auto& pair : assignment) {
    const auto child = pair.at(0).get<std::size_t>();
    const auto rb = pair.at(1).get<long long>();
    if (child >= rec.assignment.size()) throw std::out_of_range("child id out of range in matching JSON");
    if (rb >= 0) rec.assignment[child] = RbId{static_cast<std::size_t>(rb)};
  }
  rec.welfare = j.at("welfare").get<double>();
  rec.potential = j.at("potential").get<double>();
  return rec;
}

}  // namespace opshare
