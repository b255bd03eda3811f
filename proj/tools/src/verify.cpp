#include "opshare/tools/verify.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>
#include <sstream>
#include <stdexcept>

#include "opshare/analytic_rate.hpp"
#include "opshare/harness.hpp"
#include "opshare/qlearning.hpp"
#include "opshare/swap_search.hpp"
#include "opshare/tools/instances.hpp"
#include "opshare/tools/monte_carlo.hpp"
#include "opshare/welfare.hpp"

namespace opshare::tools {

namespace {

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  out << ']';
  return out.str();
}

std::string describe(const Matching& m) {
  std::ostringstream out;
  out << '{';
  for (std::size_t c = 0; c < m.child_count(); ++c) {
    const auto rb = m.rb_of(ChildId{c});
    out << (c ? " " : "") << c << "->";
    if (rb) out << rb->value;
    else out << '-';
  }
  out << '}';
  return out.str();
}

std::string describe(const SwapMove& move) {
  std::ostringstream out;
  out << "child " << move.child.value << " <-> ";
  if (const auto* hole = std::get_if<Hole>(&move.partner)) out << "hole on RB " << hole->rb.value;
  else out << "child " << std::get<ChildId>(move.partner).value;
  return out.str();
}

std::string describe(const Instance& inst) { return "c=" + join(inst.demand) + " b=" + join(inst.supply); }

SuiteOutcome pass(std::string name, std::string detail) { return {std::move(name), true, std::move(detail)}; }
SuiteOutcome fail(std::string name, std::string detail) { return {std::move(name), false, std::move(detail)}; }

bool relative_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

bool locally_maximal(const Matching& m, const RateTable& rates) {
  const double scale = std::max(std::abs(potential(m, rates)), 1.0);
  for (const auto& move : enumerate_swaps(m))
    if (potential_delta(m, move, rates) > 1e-12 * scale) return false;
  return true;
}

}  // namespace

SuiteOutcome verify_stability(const VerifyOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  for (std::size_t i = 0; i < opts.stability_instances; ++i) {
    const Instance inst = random_instance(rng);
    const Matching start = random_initial_matching(inst.ops, inst.supply, rng);
    const SearchResult res = greedy_swap(start, inst.rates, 1'000'000, rng());
    if (!res.reached_fixed_point)
      return fail("stability", "greedy did not reach a fixed point on instance " + describe(inst));
    const StabilityReport report = is_pairwise_stable(res.current, inst.rates);
    if (!report.stable)
      return fail("stability", "greedy fixed point " + describe(res.current) + " of instance " + describe(inst) +
                                   " admits beneficial swap " + describe(*report.witness));
  }
  return pass("stability", std::to_string(opts.stability_instances) + " greedy fixed points pairwise stable");
}

SuiteOutcome verify_lemma2(const VerifyOptions& opts) {
  std::mt19937_64 rng(opts.seed + 1);
  std::size_t beneficial = 0;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < opts.lemma2_instances; ++i) {
    const Instance inst = random_instance(rng);
    const Matching m = random_initial_matching(inst.ops, inst.supply, rng);
    const double before = potential(m, inst.rates);
    for (const auto& move : enumerate_swaps(m)) {
      ++checked;
      if (!is_beneficial_swap(m, move, inst.rates)) continue;
      ++beneficial;
      const double after = potential(apply_swap(m, move), inst.rates);
      if (!(after - before > 0.0))
        return fail("lemma2", "beneficial swap " + describe(move) + " on " + describe(m) + " of instance " +
                                  describe(inst) + " does not raise the potential");
    }
  }
  if (beneficial == 0) return fail("lemma2", "no beneficial swap encountered; suite is vacuous");
  return pass("lemma2", std::to_string(beneficial) + " beneficial swaps of " + std::to_string(checked) +
                            " strictly raise the potential");
}

SuiteOutcome verify_theorem2(const VerifyOptions& opts) {
  std::mt19937_64 rng(opts.seed + 2);
  std::size_t maxima = 0;
  for (std::size_t i = 0; i < opts.theorem2_instances; ++i) {
    const Instance inst = random_instance(rng);
    for (const auto& m : enumerate_matchings(inst.ops, inst.supply)) {
      if (!locally_maximal(m, inst.rates)) continue;
      ++maxima;
      const auto report = is_pairwise_stable(m, inst.rates);
      if (!report.stable)
        return fail("theorem2", "local maximum " + describe(m) + " of instance " + describe(inst) +
                                    " admits beneficial swap " + describe(*report.witness));
    }
  }
  return pass("theorem2", std::to_string(maxima) + " local maxima of the potential are pairwise stable");
}

SuiteOutcome verify_corollary1(const VerifyOptions& opts) {
  std::mt19937_64 rng(opts.seed + 3);
  InstanceLimits limits;
  limits.random_weights = false;
  std::size_t compared = 0;
  for (std::size_t i = 0; i < opts.corollary1_instances; ++i) {
    const Instance inst = random_instance(rng, limits);
    std::vector<Matching> distinct;
    for (auto& m : enumerate_matchings(inst.ops, inst.supply))
      if (sibling_distinct(m)) distinct.push_back(std::move(m));
    if (distinct.empty()) continue;
    for (const auto& m : distinct) {
      const auto report = social_welfare(m, inst.rates);
      if (!relative_close(report.social_welfare, report.potential, 1e-9))
        return fail("corollary1", "welfare and potential differ on " + describe(m) + " of instance " + describe(inst));
    }
    const auto by_phi = maximize(distinct, inst.rates, Objective::potential);
    const auto by_welfare = maximize(distinct, inst.rates, Objective::social_welfare);
    if (by_phi.matchings != by_welfare.matchings)
      return fail("corollary1", "maximizer sets differ on instance " + describe(inst) + ": potential picks " +
                                    describe(by_phi.matchings.front()) + ", welfare picks " +
                                    describe(by_welfare.matchings.front()));
    ++compared;
  }
  if (compared == 0) return fail("corollary1", "no instance had a sibling-distinct matching");
  return pass("corollary1", std::to_string(compared) + " instances with equal maximizer sets");
}

SuiteOutcome verify_mcmc(const VerifyOptions& opts) {
  if (acceptance_probability(0.0, 100.0) != 0.5) return fail("mcmc", "acceptance at zero gain is not 1/2");

  // Two parents, one child each, two RBs of supply 2: the orthogonal matchings
  // score 20 and the co-channel ones 12. A correct sampler sits at 20.
  {
    const std::vector<std::size_t> demand{1, 1};
    const auto rates = RateTable::from_child_rates({{10.0, 6.0}, {10.0, 6.0}}, {1.0, 1.0}, demand);
    const auto ops = build_augmented(demand);
    const std::vector<std::optional<RbId>> together{RbId{0}, RbId{0}};
    SearchOptions so;
    so.algorithm = SearchAlgorithm::mcmc;
    so.seed = opts.seed + 4;
    so.sharpness = 1.0;
    so.flip_acceptance_sign = opts.flip_acceptance;
    SwapSearch search(Matching::from_assignment(ops, {2, 2}, together), rates, so);
    const std::size_t steps = 2000;
    std::size_t at_optimum = 0;
    for (std::size_t t = 0; t < steps; ++t) {
      search.step(rates);
      if (t >= steps / 2 && relative_close(search.current_value(), 20.0, 1e-12)) ++at_optimum;
    }
    const double occupancy = static_cast<double>(at_optimum) / static_cast<double>(steps / 2);
    if (occupancy < 0.9) {
      std::ostringstream msg;
      msg << "steady-state occupancy of the optimum is " << occupancy << " (< 0.9): acceptance favours worse moves";
      return fail("mcmc", msg.str());
    }
  }

  // Best-found equals the enumerated optimum.
  NetworkConfig cfg = make_network(3, 3, {1, 1, 1}, 1);
  const auto rates = RateTable::homogeneous(cfg, PowerPmf::degenerate(cfg.power_levels, cfg.power_levels - 1));
  const auto ops = build_augmented(cfg);
  const double optimum = maximize(enumerate_matchings(ops, cfg.supply), rates, Objective::potential).value;
  std::mt19937_64 rng(opts.seed + 5);
  std::size_t hits = 0;
  for (std::size_t run = 0; run < opts.mcmc_runs; ++run) {
    SearchOptions so;
    so.algorithm = SearchAlgorithm::mcmc;
    so.max_iterations = opts.mcmc_iterations;
    so.seed = rng();
    so.sharpness = cfg.acceptance_sharpness;
    so.flip_acceptance_sign = opts.flip_acceptance;
    const auto res = run_search(random_initial_matching(ops, cfg.supply, rng), rates, so);
    if (relative_close(potential(res.best, rates), optimum, 1e-9)) ++hits;
  }
  if (hits * 100 < 99 * opts.mcmc_runs)
    return fail("mcmc", "optimum found in only " + std::to_string(hits) + "/" + std::to_string(opts.mcmc_runs) +
                            " runs");
  return pass("mcmc", "logistic acceptance holds the optimum; best-found optimal in " + std::to_string(hits) + "/" +
                          std::to_string(opts.mcmc_runs) + " runs");
}

SuiteOutcome verify_quadrature(const VerifyOptions& opts) {
  NetworkConfig cfg = make_network(1, 1, {1}, 1);
  const auto pmf = PowerPmf::degenerate(cfg.power_levels, cfg.power_levels - 1);
  const std::vector<double> powers{cfg.max_power_w};
  std::ostringstream detail;
  RateOptions nested;
  nested.decondition = DeconditionMethod::nested;
  for (int mult = 1; mult <= 3; ++mult) {
    const double lambda_l = mult * cfg.sbs_intensity;
    const double analytic = expected_rate_conditional(lambda_l, cfg.max_power_w, pmf, 10.0, cfg);
    const auto mc = monte_carlo_rate(lambda_l, cfg.max_power_w, powers, 10.0, 4.0, opts.monte_carlo_realizations,
                                     opts.seed + 10 + static_cast<std::uint64_t>(mult));
    const double rel = std::abs(analytic - mc.mean) / mc.mean;
    detail << (mult > 1 ? "; " : "") << mult << "x lambda: " << analytic << " vs MC " << mc.mean;
    if (rel > 0.03) return fail("quadrature", detail.str() + " differs by more than 3%");
  }
  for (int mult = 0; mult <= 3; ++mult) {
    const double lambda_l = mult * cfg.sbs_intensity;
    const double a = expected_rate_deconditioned(lambda_l, cfg.max_power_w, pmf, cfg);
    const double b = expected_rate_deconditioned(lambda_l, cfg.max_power_w, pmf, cfg, nested);
    if (!relative_close(a, b, 1e-9)) {
      std::ostringstream msg;
      msg << "de-conditioning routes disagree at " << mult << "x lambda: " << a << " vs " << b;
      return fail("quadrature", msg.str());
    }
  }
  return pass("quadrature", detail.str());
}

SuiteOutcome verify_qlearning(const VerifyOptions& opts) {
  std::mt19937_64 rng(opts.seed + 6);
  std::uniform_int_distribution<std::size_t> states(1, 3);
  std::uniform_int_distribution<std::size_t> actions(2, 4);
  QLearningParams params;
  params.epsilon = 0.2;
  params.rate.kind = LearningRate::Kind::harmonic;
  double worst = 0.0;
  for (std::size_t i = 0; i < opts.mdp_count; ++i) {
    const auto mdp = random_mdp(states(rng), actions(rng), opts.q_discount, rng);
    const auto oracle = value_iteration_oracle(mdp);
    const auto q = learn_on_mdp(mdp, params, opts.q_steps, rng());
    const double d = sup_distance(q, oracle);
    worst = std::max(worst, d);
    if (!(d < 1e-3)) {
      std::ostringstream msg;
      msg << "MDP " << i << " (" << mdp.states() << " states, " << mdp.actions() << " actions): sup distance " << d
          << " >= 1e-3";
      return fail("qlearning", msg.str());
    }
  }
  std::ostringstream msg;
  msg << opts.mdp_count << " MDPs, worst sup distance " << worst;
  return pass("qlearning", msg.str());
}

namespace {

using Rational = boost::multiprecision::cpp_rational;

// H_Q evaluated exactly on the (binary) values of the MDP and Q.
std::vector<std::vector<Rational>> exact_bellman(const ExplicitMdp& mdp, const QMatrix& q) {
  std::vector<Rational> best(mdp.states());
  for (std::size_t v = 0; v < mdp.states(); ++v) best[v] = Rational(*std::max_element(q[v].begin(), q[v].end()));
  std::vector<std::vector<Rational>> out(mdp.states(), std::vector<Rational>(mdp.actions()));
  for (std::size_t s = 0; s < mdp.states(); ++s)
    for (std::size_t a = 0; a < mdp.actions(); ++a) {
      Rational future = 0;
      for (std::size_t v = 0; v < mdp.states(); ++v) future += Rational(mdp.transition[s][a][v]) * best[v];
      out[s][a] = Rational(mdp.reward[s][a]) + Rational(mdp.discount) * future;
    }
  return out;
}

}  // namespace

SuiteOutcome verify_contraction(const VerifyOptions& opts) {
  std::mt19937_64 rng(opts.seed + 7);
  std::uniform_int_distribution<std::size_t> states(1, 3);
  std::uniform_int_distribution<std::size_t> actions(1, 4);
  std::uniform_real_distribution<double> value(-10.0, 10.0);
  const double gamma = 0.95;
  for (std::size_t i = 0; i < opts.contraction_pairs; ++i) {
    const auto mdp = random_mdp(states(rng), actions(rng), gamma, rng);
    QMatrix q1(mdp.states(), std::vector<double>(mdp.actions()));
    QMatrix q2 = q1;
    for (std::size_t s = 0; s < mdp.states(); ++s)
      for (std::size_t a = 0; a < mdp.actions(); ++a) {
        q1[s][a] = value(rng);
        q2[s][a] = value(rng);
      }
    // The inequality is checked without slack in exact arithmetic; the double
    // implementation must agree with the exact operator to rounding.
    const auto h1 = exact_bellman(mdp, q1);
    const auto h2 = exact_bellman(mdp, q2);
    const auto d1 = apply_bellman(mdp, q1);
    Rational lhs = 0;
    Rational dq = 0;
    for (std::size_t s = 0; s < mdp.states(); ++s)
      for (std::size_t a = 0; a < mdp.actions(); ++a) {
        lhs = std::max<Rational>(lhs, abs(Rational(h1[s][a] - h2[s][a])));
        dq = std::max<Rational>(dq, abs(Rational(Rational(q1[s][a]) - Rational(q2[s][a]))));
        if (!relative_close(d1[s][a], static_cast<double>(h1[s][a]), 1e-12))
          return fail("contraction", "apply_bellman deviates from the exact operator on pair " + std::to_string(i));
      }
    const Rational rhs = Rational(gamma) * dq;
    if (!(lhs <= rhs)) {
      std::ostringstream msg;
      msg << "pair " << i << ": ||HQ1 - HQ2|| = " << static_cast<double>(lhs)
          << " > gamma ||Q1 - Q2|| = " << static_cast<double>(rhs);
      return fail("contraction", msg.str());
    }
  }
  return pass("contraction", std::to_string(opts.contraction_pairs) + " random pairs contract by gamma = 0.95");
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"lemma2",     "theorem2",   "stability", "corollary1",
                                              "mcmc",       "quadrature", "qlearning", "contraction"};
  return names;
}

SuiteOutcome run_suite(const std::string& name, const VerifyOptions& opts) {
  if (name == "lemma2") return verify_lemma2(opts);
  if (name == "theorem2") return verify_theorem2(opts);
  if (name == "stability") return verify_stability(opts);
  if (name == "corollary1") return verify_corollary1(opts);
  if (name == "mcmc") return verify_mcmc(opts);
  if (name == "quadrature") return verify_quadrature(opts);
  if (name == "qlearning") return verify_qlearning(opts);
  if (name == "contraction") return verify_contraction(opts);
  throw std::invalid_argument("unknown verification suite '" + name + "'");
}

}  // namespace opshare::tools
