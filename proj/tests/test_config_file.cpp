#include <gtest/gtest.h>

#include <string>

#include "opshare/errors.hpp"
#include "opshare/tools/config_file.hpp"

namespace opshare::tools {
namespace {

const std::string kMinimal = "network.K = 2\nnetwork.L = 3\nnetwork.c = 1, 2\n";

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(ConfigFile, MinimalUsesDefaults) {
  const RunConfig cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.spec.network.num_operators, 2u);
  EXPECT_EQ(cfg.spec.network.demand, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(cfg.spec.network.supply, (std::vector<std::size_t>{4, 4, 4}));
  EXPECT_EQ(cfg.unit, RateUnit::bits);
  EXPECT_EQ(cfg.spec.trials, 100u);
}

TEST(ConfigFile, FullKeySet) {
  const std::string text = kMinimal +
                           "# comment\n"
                           "network.b = 2 2 2\n"
                           "network.p_tot_dbm = 20\n"
                           "network.power_levels = 3\n"
                           "network.rho_op = 1.5 0.5\n"
                           "matching.algorithm = greedy\n"
                           "matching.T_b = 7\n"
                           "qlearning.gamma = 0.5\n"
                           "qlearning.beta = harmonic\n"
                           "qlearning.max_operator = exclude-taken\n"
                           "qlearning.T_p = 0.3\n"
                           "experiment.kind = demand-sweep\n"
                           "experiment.demand_grid = 1 1; 2 2; 3 3\n"
                           "experiment.power_mode = q-learning\n"
                           "rate.integrand = as-printed\n"
                           "output.unit = nats\n";
  const RunConfig cfg = parse_config(text);
  const auto& n = cfg.spec.network;
  EXPECT_EQ(n.supply, (std::vector<std::size_t>{2, 2, 2}));
  EXPECT_NEAR(n.max_power_w, 0.1, 1e-15);
  EXPECT_EQ(n.power_levels, 3u);
  EXPECT_EQ(n.operator_weights, (std::vector<double>{1.5, 0.5}));
  EXPECT_EQ(n.acceptance_sharpness, 7.0);
  EXPECT_EQ(n.learning.discount, 0.5);
  EXPECT_EQ(n.learning.rate.kind, LearningRate::Kind::harmonic);
  EXPECT_EQ(n.learning.max_operator, MaxOperator::exclude_taken);
  EXPECT_EQ(n.learning.boltzmann_temperature, 0.3);
  EXPECT_EQ(cfg.spec.algorithm, SearchAlgorithm::greedy);
  EXPECT_EQ(cfg.spec.kind, ExperimentKind::demand_sweep);
  EXPECT_EQ(cfg.spec.demand_grid.size(), 3u);
  EXPECT_EQ(cfg.spec.power_mode, PowerMode::q_learning);
  EXPECT_EQ(cfg.spec.rate.integrand, RateIntegrand::as_printed);
  EXPECT_EQ(cfg.unit, RateUnit::nats);
}

TEST(ConfigFile, MissingRbCountIsNamed) {
  const std::string msg = error_of("network.K = 2\nnetwork.c = 1 1\n");
  EXPECT_NE(msg.find("network.L"), std::string::npos) << msg;
}

TEST(ConfigFile, DiagnosticsCarryLineAndKey) {
  EXPECT_NE(error_of(kMinimal + "network.colour = red\n").find("cfg:4"), std::string::npos);
  EXPECT_NE(error_of(kMinimal + "network.colour = red\n").find("network.colour"), std::string::npos);
  EXPECT_NE(error_of(kMinimal + "network.K = 3\n").find("duplicate"), std::string::npos);
  EXPECT_NE(error_of(kMinimal + "network.lambda =\n").find("no value"), std::string::npos);
  EXPECT_NE(error_of(kMinimal + "experiment.trials = many\n").find("experiment.trials"), std::string::npos);
  EXPECT_NE(error_of(kMinimal + "qlearning.epsilon = 2\n").find("epsilon"), std::string::npos);
  EXPECT_FALSE(error_of("network.K = 2\nnetwork.L = 1\nnetwork.c = 1 1\nnetwork.b = 1\n").empty());
}

TEST(ConfigFile, MissingFile) { EXPECT_THROW(load_config("/nonexistent/opshare.conf"), ConfigError); }

}  // namespace
}  // namespace opshare::tools
