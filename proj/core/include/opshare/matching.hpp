#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "opshare/network_config.hpp"

namespace opshare {

template <class Tag>
struct StrongId {
  std::size_t value = 0;

  constexpr StrongId() = default;
  constexpr explicit StrongId(std::size_t v) : value(v) {}
  constexpr auto operator<=>(const StrongId&) const = default;
};

using ChildId = StrongId<struct ChildTag>;
using RbId = StrongId<struct RbTag>;

/// Parent operators cloned into children, one child per demanded RB.
/// Children are numbered parent-major: parent 0's children come first.
struct AugmentedOpSet {
  std::vector<std::size_t> parent_of;
  std::vector<std::vector<ChildId>> children_of;

  std::size_t child_count() const { return parent_of.size(); }
  std::size_t parent_count() const { return children_of.size(); }
  std::size_t parent(ChildId c) const { return parent_of[c.value]; }
  bool siblings(ChildId a, ChildId b) const { return a != b && parent(a) == parent(b); }
};

AugmentedOpSet build_augmented(const NetworkConfig& cfg);
AugmentedOpSet build_augmented(std::span<const std::size_t> demand);

/// A vacancy on an RB, the swap partner for a move into spare capacity.
struct Hole {
  RbId rb;
  bool operator==(const Hole&) const = default;
};

using SwapPartner = std::variant<ChildId, Hole>;

struct SwapMove {
  ChildId child;
  SwapPartner partner;
  bool operator==(const SwapMove&) const = default;
};

/// Assignment of children to RBs. Each child holds at most one RB, each RB l
/// holds at most b_l children, and the child->RB map and the per-RB occupant
/// lists always agree.
class Matching {
 public:
  Matching(AugmentedOpSet ops, std::vector<std::size_t> supply);

  /// Throws ConstraintError when the assignment overfills an RB or names an
  /// RB that does not exist.
  static Matching from_assignment(AugmentedOpSet ops, std::vector<std::size_t> supply,
                                  std::span<const std::optional<RbId>> rb_of_child);

  const AugmentedOpSet& ops() const { return ops_; }
  std::span<const std::size_t> supply() const { return supply_; }
  std::size_t child_count() const { return rb_of_.size(); }
  std::size_t rb_count() const { return occupants_.size(); }

  std::optional<RbId> rb_of(ChildId c) const { return rb_of_.at(c.value); }
  std::span<const ChildId> occupants(RbId rb) const { return occupants_.at(rb.value); }
  std::size_t occupancy(RbId rb) const { return occupants_.at(rb.value).size(); }
  std::size_t capacity(RbId rb) const { return supply_.at(rb.value); }
  bool has_vacancy(RbId rb) const { return occupancy(rb) < capacity(rb); }
  bool fully_assigned() const;

  void assign(ChildId c, RbId rb);
  void unassign(ChildId c);

  /// True iff another child of the same parent sits on c's RB.
  bool has_sibling_collision(ChildId c) const;
  /// Distinct RBs held by a parent (L_k).
  std::vector<RbId> rbs_of_parent(std::size_t parent) const;
  /// x_{lk}: 1 iff parent k has a child on RB l. Indexed [l][k].
  std::vector<std::vector<int>> parent_matrix() const;
  /// Children of different parents sharing an RB, counted as unordered pairs.
  std::size_t inter_operator_pairs() const;

  bool is_consistent() const;
  std::vector<std::optional<RbId>> assignment() const { return rb_of_; }

  bool operator==(const Matching& other) const { return rb_of_ == other.rb_of_ && supply_ == other.supply_; }
  /// Lexicographic on the child->RB map; unassigned sorts first.
  std::strong_ordering operator<=>(const Matching& other) const;

 private:
  AugmentedOpSet ops_;
  std::vector<std::size_t> supply_;
  std::vector<std::optional<RbId>> rb_of_;
  std::vector<std::vector<ChildId>> occupants_;
};

/// Exchange the RBs of two children, or move a child into a vacancy. All other
/// assignments are unchanged. Throws ConstraintError for an invalid hole.
Matching apply_swap(const Matching& m, ChildId child, SwapPartner partner);
inline Matching apply_swap(const Matching& m, const SwapMove& move) { return apply_swap(m, move.child, move.partner); }

/// Every exchange between children on different RBs and every move of a child
/// into a vacancy on another RB, in a fixed order.
std::vector<SwapMove> enumerate_swaps(const Matching& m);

/// Number of complete assignments respecting supply (sibling collisions allowed).
double count_matchings(std::size_t children, std::span<const std::size_t> supply);

/// All complete assignments respecting supply, in lexicographic order.
std::vector<Matching> enumerate_matchings(const AugmentedOpSet& ops, std::span<const std::size_t> supply);

/// JSON: {"assignment": [[child, rb], ...], "welfare": S, "potential": phi}.
/// Unassigned children are written with rb = -1.
nlohmann::json matching_to_json(const Matching& m, double welfare, double potential);
struct MatchingRecord {
  std::vector<std::optional<RbId>> assignment;
  double welfare = 0.0;
  double potential = 0.0;
};
MatchingRecord matching_from_json(const nlohmann::json& j);

}  // namespace opshare
