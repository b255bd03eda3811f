#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "opshare/analytic_rate.hpp"
#include "opshare/matching.hpp"

namespace opshare {

/// Utility of a child: its desirability on its RB, zeroed when a sibling
/// shares that RB. Unassigned children have utility 0.
double utility(ChildId c, const Matching& m, const RateTable& rates);

/// Desirability of c's current RB ignoring sibling collisions (0 if unassigned).
double desirability(ChildId c, const Matching& m, const RateTable& rates);

struct WelfareReport {
  /// sum_k rho_k R_OPk, R_OPk the sum of the parent's child rates over the
  /// number of distinct RBs it holds.
  double social_welfare = 0.0;
  /// sum over children of desirability * indicator.
  double potential = 0.0;
  /// rho_k R_OPk per parent.
  std::vector<double> parent_rates;
  std::vector<double> desirability;
  std::vector<int> indicator;
};

WelfareReport social_welfare(const Matching& m, const RateTable& rates);
double potential(const Matching& m, const RateTable& rates);

/// Change in potential caused by the swap. Only occupants of the two involved
/// RBs can change utility, so this sums their utility differences; when every
/// difference is nonnegative the result is exactly nonnegative.
double potential_delta(const Matching& m, const SwapMove& move, const RateTable& rates);

/// The two-sided exchange condition: both swapped children weakly improve, one
/// of them strictly, and every other occupant of the two involved RBs weakly
/// improves. For a hole move only the moving child is a swapped party.
/// Comparisons are exact. A swap within one RB is never beneficial.
bool is_beneficial_swap(const Matching& m, const SwapMove& move, const RateTable& rates);

struct StabilityReport {
  bool stable = true;
  std::optional<SwapMove> witness;
};

/// Scans every exchange and every hole move; the first beneficial one found is
/// returned as the witness.
StabilityReport is_pairwise_stable(const Matching& m, const RateTable& rates);

enum class Objective { potential, social_welfare };

double evaluate(const Matching& m, const RateTable& rates, Objective objective);

struct Maximizers {
  double value = 0.0;
  /// Every matching within 1e-9 relative of the maximum, in lexicographic order;
  /// front() is the canonical tie-break.
  std::vector<Matching> matchings;
};

/// Brute-force maximum over the candidates. Throws std::invalid_argument if
/// the candidate list is empty.
Maximizers maximize(const std::vector<Matching>& candidates, const RateTable& rates, Objective objective);

/// True iff no sibling pair shares an RB.
bool sibling_distinct(const Matching& m);

}  // namespace opshare
