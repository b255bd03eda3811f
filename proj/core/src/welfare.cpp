#include "opshare/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace opshare {

namespace {

// Occupants of the RBs touched by a move, in the original matching.
std::vector<ChildId> affected_children(const Matching& m, const SwapMove& move) {
  std::vector<ChildId> out;
  const auto from = m.rb_of(move.child);
  if (from) {
    const auto occ = m.occupants(*from);
    out.assign(occ.begin(), occ.end());
  }
  std::optional<RbId> to;
  if (const auto* hole = std::get_if<Hole>(&move.partner)) {
    to = hole->rb;
  } else {
    to = m.rb_of(std::get<ChildId>(move.partner));
  }
  if (to && to != from) {
    const auto occ = m.occupants(*to);
    out.insert(out.end(), occ.begin(), occ.end());
  }
  return out;
}

bool same_rb_move(const Matching& m, const SwapMove& move) {
  const auto from = m.rb_of(move.child);
  if (const auto* hole = std::get_if<Hole>(&move.partner)) return from == hole->rb;
  return from == m.rb_of(std::get<ChildId>(move.partner));
}

}  // namespace

double desirability(ChildId c, const Matching& m, const RateTable& rates) {
  const auto rb = m.rb_of(c);
  if (!rb) return 0.0;
  return rates.desirability(m.ops().parent(c), m.occupancy(*rb));
}

double utility(ChildId c, const Matching& m, const RateTable& rates) {
  if (m.has_sibling_collision(c)) return 0.0;
  return desirability(c, m, rates);
}

WelfareReport social_welfare(const Matching& m, const RateTable& rates) {
  WelfareReport report;
  const auto& ops = m.ops();
  report.desirability.resize(m.child_count());
  report.indicator.resize(m.child_count());
  for (std::size_t c = 0; c < m.child_count(); ++c) {
    const ChildId id{c};
    report.desirability[c] = desirability(id, m, rates);
    report.indicator[c] = m.rb_of(id) && !m.has_sibling_collision(id) ? 1 : 0;
    report.potential += report.desirability[c] * report.indicator[c];
  }
  report.parent_rates.assign(ops.parent_count(), 0.0);
  for (std::size_t k = 0; k < ops.parent_count(); ++k) {
    const std::size_t held = m.rbs_of_parent(k).size();
    if (held == 0) continue;
    double sum = 0.0;
    for (ChildId c : ops.children_of[k])
      if (const auto rb = m.rb_of(c)) sum += rates.child_rate(k, m.occupancy(*rb));
    report.parent_rates[k] = rates.weight(k) * sum / static_cast<double>(held);
    report.social_welfare += report.parent_rates[k];
  }
  return report;
}

double potential(const Matching& m, const RateTable& rates) {
  double phi = 0.0;
  for (std::size_t c = 0; c < m.child_count(); ++c) phi += utility(ChildId{c}, m, rates);
  return phi;
}

double potential_delta(const Matching& m, const SwapMove& move, const RateTable& rates) {
  if (same_rb_move(m, move)) return 0.0;
  const Matching next = apply_swap(m, move);
  double delta = 0.0;
  for (ChildId c : affected_children(m, move)) delta += utility(c, next, rates) - utility(c, m, rates);
  return delta;
}

bool is_beneficial_swap(const Matching& m, const SwapMove& move, const RateTable& rates) {
  if (same_rb_move(m, move)) return false;
  const Matching next = apply_swap(m, move);
  const auto* partner = std::get_if<ChildId>(&move.partner);
  bool strict = false;
  for (ChildId c : affected_children(m, move)) {
    const double before = utility(c, m, rates);
    const double after = utility(c, next, rates);
    if (after < before) return false;
    const bool swapped = c == move.child || (partner && c == *partner);
    if (swapped && after > before) strict = true;
  }
  return strict;
}

StabilityReport is_pairwise_stable(const Matching& m, const RateTable& rates) {
  for (const SwapMove& move : enumerate_swaps(m)) {
    if (is_beneficial_swap(m, move, rates)) return {false, move};
  }
  return {};
}

double evaluate(const Matching& m, const RateTable& rates, Objective objective) {
  return objective == Objective::potential ? potential(m, rates) : social_welfare(m, rates).social_welfare;
}

Maximizers maximize(const std::vector<Matching>& candidates, const RateTable& rates, Objective objective) {
  if (candidates.empty()) throw std::invalid_argument("no candidate matchings");
  std::vector<double> values;
  values.reserve(candidates.size());
  for (const auto& m : candidates) values.push_back(evaluate(m, rates, objective));
  Maximizers out;
  out.value = *std::max_element(values.begin(), values.end());
  const double tol = 1e-9 * std::max(std::abs(out.value), 1e-300);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (values[i] >= out.value - tol) out.matchings.push_back(candidates[i]);
  std::sort(out.matchings.begin(), out.matchings.end());
  return out;
}

bool sibling_distinct(const Matching& m) {
  for (std::size_t c = 0; c < m.child_count(); ++c)
    if (m.has_sibling_collision(ChildId{c})) return false;
  return true;
}

}  // namespace opshare
