#include "opshare/swap_search.hpp"

#include <cmath>

#include "opshare/errors.hpp"
#include "opshare/welfare.hpp"

namespace opshare {

Matching random_initial_matching(const AugmentedOpSet& ops, std::vector<std::size_t> supply, std::mt19937_64& rng) {
  Matching m(ops, std::move(supply));
  std::vector<RbId> open;
  for (std::size_t c = 0; c < ops.child_count(); ++c) {
    open.clear();
    for (std::size_t l = 0; l < m.rb_count(); ++l)
      if (m.has_vacancy(RbId{l})) open.push_back(RbId{l});
    if (open.empty()) throw ConstraintError("children exceed total RB supply");
    std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
    m.assign(ChildId{c}, open[pick(rng)]);
  }
  return m;
}

std::optional<SwapMove> sample_swap(const Matching& m, std::mt19937_64& rng) {
  const std::size_t rbs = m.rb_count();
  if (rbs < 2) return std::nullopt;
  std::uniform_int_distribution<std::size_t> first(0, rbs - 1);
  std::uniform_int_distribution<std::size_t> second(0, rbs - 2);
  const RbId a{first(rng)};
  std::size_t b = second(rng);
  if (b >= a.value) ++b;
  const RbId rb_b{b};

  // Slot index == occupancy stands for the hole.
  const auto pick_slot = [&](RbId rb) {
    const std::size_t slots = m.occupancy(rb) + (m.has_vacancy(rb) ? 1 : 0);
    std::uniform_int_distribution<std::size_t> slot(0, slots - 1);
    return slot(rng);
  };
  const std::size_t slot_a = pick_slot(a);
  const std::size_t slot_b = pick_slot(rb_b);
  const bool hole_a = slot_a == m.occupancy(a);
  const bool hole_b = slot_b == m.occupancy(rb_b);
  if (hole_a && hole_b) return std::nullopt;
  if (hole_a) return SwapMove{m.occupants(rb_b)[slot_b], Hole{a}};
  if (hole_b) return SwapMove{m.occupants(a)[slot_a], Hole{rb_b}};
  return SwapMove{m.occupants(a)[slot_a], m.occupants(rb_b)[slot_b]};
}

double acceptance_probability(double delta, double sharpness) {
  const double x = sharpness * delta;
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

const char* to_string(SearchAlgorithm algorithm) { return algorithm == SearchAlgorithm::greedy ? "greedy" : "mcmc"; }

SwapSearch::SwapSearch(Matching initial, const RateTable& rates, SearchOptions opts)
    : opts_(opts), rng_(opts.seed), current_(initial), best_(std::move(initial)) {
  current_value_ = potential(current_, rates);
  best_value_ = current_value_;
}

bool SwapSearch::improving(double delta) const {
  // Guards against cycling on rounding noise; genuine gains are differences of
  // distinct table entries and sit far above this.
  return delta > 1e-12 * std::max(std::abs(current_value_), 1.0);
}

void SwapSearch::accept(const SwapMove& move, double delta) {
  current_ = apply_swap(current_, move);
  current_value_ += delta;
  ++accepted_;
  if (current_value_ > best_value_) {
    best_ = current_;
    best_value_ = current_value_;
  }
}

bool SwapSearch::greedy_step(const RateTable& rates) {
  if (fixed_point_) return false;
  if (const auto move = sample_swap(current_, rng_)) {
    const double delta = potential_delta(current_, *move, rates);
    if (improving(delta)) {
      accept(*move, delta);
      rejections_in_a_row_ = 0;
      return true;
    }
  }
  if (++rejections_in_a_row_ < opts_.patience) return false;
  rejections_in_a_row_ = 0;
  for (const SwapMove& move : enumerate_swaps(current_)) {
    const double delta = potential_delta(current_, move, rates);
    if (improving(delta)) {
      accept(move, delta);
      return true;
    }
  }
  fixed_point_ = true;
  return false;
}

bool SwapSearch::mcmc_step(const RateTable& rates) {
  const auto move = sample_swap(current_, rng_);
  if (!move) return false;
  const double delta = potential_delta(current_, *move, rates);
  const double sign = opts_.flip_acceptance_sign ? -1.0 : 1.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool drawn = unit(rng_) < acceptance_probability(sign * delta, opts_.sharpness);
  if (!drawn && !improving(delta)) return false;
  accept(*move, delta);
  return true;
}

bool SwapSearch::step(const RateTable& rates) {
  return opts_.algorithm == SearchAlgorithm::greedy ? greedy_step(rates) : mcmc_step(rates);
}

void SwapSearch::rescore(const RateTable& rates) {
  current_value_ = potential(current_, rates);
  best_value_ = potential(best_, rates);
  if (current_value_ > best_value_) {
    best_ = current_;
    best_value_ = current_value_;
  }
  fixed_point_ = false;
}

SearchResult run_search(const Matching& initial, const RateTable& rates, const SearchOptions& opts) {
  SwapSearch search(initial, rates, opts);
  SearchResult out{search.best(), search.current(), {}, {}, 0, false};
  out.trace.reserve(opts.max_iterations);
  out.best_trace.reserve(opts.max_iterations);
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    search.step(rates);
    out.trace.push_back(search.current_value());
    out.best_trace.push_back(search.best_value());
    if (search.at_fixed_point()) break;
  }
  out.trace.resize(opts.max_iterations, search.current_value());
  out.best_trace.resize(opts.max_iterations, search.best_value());
  out.best = search.best();
  out.current = search.current();
  out.accepted = search.accepted();
  out.reached_fixed_point = search.at_fixed_point();
  return out;
}

SearchResult greedy_swap(const Matching& initial, const RateTable& rates, std::size_t max_iterations,
                         std::uint64_t seed) {
  SearchOptions opts;
  opts.algorithm = SearchAlgorithm::greedy;
  opts.max_iterations = max_iterations;
  opts.seed = seed;
  return run_search(initial, rates, opts);
}

SearchResult mcmc_swap(const Matching& initial, const RateTable& rates, std::size_t max_iterations,
                       std::uint64_t seed, double sharpness) {
  SearchOptions opts;
  opts.algorithm = SearchAlgorithm::mcmc;
  opts.max_iterations = max_iterations;
  opts.seed = seed;
  opts.sharpness = sharpness;
  return run_search(initial, rates, opts);
}

}  // namespace opshare
