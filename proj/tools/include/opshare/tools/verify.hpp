#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace opshare::tools {

/// Sizes default to the acceptance-level workloads.
struct VerifyOptions {
  std::uint64_t seed = 20240601;
  /// Mutation test: run MCMC with the sign of the logistic exponent flipped.
  bool flip_acceptance = false;

  std::size_t stability_instances = 1000;
  std::size_t lemma2_instances = 200;
  std::size_t theorem2_instances = 60;
  std::size_t corollary1_instances = 60;
  std::size_t mcmc_runs = 100;
  std::size_t mcmc_iterations = 2000;
  std::size_t monte_carlo_realizations = 100000;
  std::size_t mdp_count = 10;
  std::size_t q_steps = 100000;
  double q_discount = 0.05;
  std::size_t contraction_pairs = 100;
};

struct SuiteOutcome {
  std::string name;
  bool passed = false;
  /// Summary on success, failing property and witness otherwise.
  std::string detail;
};

/// lemma2, theorem2, stability, corollary1, mcmc, quadrature, qlearning, contraction.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
SuiteOutcome run_suite(const std::string& name, const VerifyOptions& opts);

// Individual suites, also used by the acceptance gate.
SuiteOutcome verify_stability(const VerifyOptions& opts);
SuiteOutcome verify_lemma2(const VerifyOptions& opts);
SuiteOutcome verify_theorem2(const VerifyOptions& opts);
SuiteOutcome verify_corollary1(const VerifyOptions& opts);
SuiteOutcome verify_mcmc(const VerifyOptions& opts);
SuiteOutcome verify_quadrature(const VerifyOptions& opts);
SuiteOutcome verify_qlearning(const VerifyOptions& opts);
SuiteOutcome verify_contraction(const VerifyOptions& opts);

}  // namespace opshare::tools
