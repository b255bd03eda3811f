#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "opshare/tools/cli.hpp"

namespace opshare::tools {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("opshare-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

const char* kRunConfig =
    "experiment.id = cli run\n"
    "experiment.trials = 3\n"
    "experiment.iterations = 40\n"
    "network.K = 2\nnetwork.L = 2\nnetwork.c = 1 1\nnetwork.b = 1\n";

TEST_F(CliTest, RunWritesOneRowPerTrial) {
  RunOptions opts;
  opts.config = write_config("run.conf", kRunConfig);
  opts.out_dir = dir_ / "out";
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(opts, out, err), kExitOk) << err.str();
  const std::string csv = slurp(dir_ / "out" / "cli_run.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "cli_run.json"));
}

TEST_F(CliTest, SeedOverrideChangesOutputReproducibly) {
  const fs::path cfg = write_config("run.conf",
                                    "experiment.id = seeded\nexperiment.trials = 2\nexperiment.iterations = 30\n"
                                    "network.K = 2\nnetwork.L = 3\nnetwork.c = 2 2\nnetwork.b = 2\n");
  auto run = [&](std::optional<std::uint64_t> seed, const std::string& sub) {
    RunOptions opts;
    opts.config = cfg;
    opts.seed = seed;
    opts.out_dir = dir_ / sub;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run(opts, out, err), kExitOk) << err.str();
    return slurp(dir_ / sub / "seeded.csv");
  };
  const std::string base = run(std::nullopt, "a");
  const std::string seeded = run(500, "b");
  EXPECT_NE(base, seeded);
  EXPECT_EQ(seeded, run(500, "c"));
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  RunOptions opts;
  opts.config = write_config("run.conf", kRunConfig);
  const fs::path env_dir = dir_ / "from-env";
  ::setenv(kOutputDirEnv, env_dir.c_str(), 1);
  std::ostringstream out, err;
  const int code = cmd_run(opts, out, err);
  ::unsetenv(kOutputDirEnv);
  ASSERT_EQ(code, kExitOk) << err.str();
  EXPECT_TRUE(fs::exists(env_dir / "cli_run.csv"));
}

TEST_F(CliTest, MissingKeyIsConfigError) {
  RunOptions opts;
  opts.config = write_config("bad.conf", "network.K = 2\nnetwork.c = 1 1\n");
  opts.out_dir = dir_;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(opts, out, err), kExitConfigError);
  EXPECT_NE(err.str().find("L"), std::string::npos);
  EXPECT_NE(err.str().find("network.L"), std::string::npos);
}

TEST_F(CliTest, EnumerateSmallInstances) {
  EnumerateOptions opts;
  opts.config = write_config("e.conf", "network.K = 2\nnetwork.L = 2\nnetwork.c = 1 1\nnetwork.b = 2\n");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_enumerate(opts, out, err), kExitOk) << err.str();
  EXPECT_NE(out.str().find("# 4 matchings"), std::string::npos) << out.str();
  // The maximizer puts the two operators on different RBs.
  EXPECT_NE(out.str().find("welfare maximizer: 0:0 1:1"), std::string::npos) << out.str();

  opts.config = write_config("one.conf", "network.K = 1\nnetwork.L = 1\nnetwork.c = 1\nnetwork.b = 1\n");
  std::ostringstream one;
  ASSERT_EQ(cmd_enumerate(opts, one, err), kExitOk);
  EXPECT_NE(one.str().find("# 1 matchings"), std::string::npos);
}

TEST_F(CliTest, EnumerateRefusesLargeInstances) {
  EnumerateOptions opts;
  opts.config = write_config("big.conf", "network.K = 4\nnetwork.L = 16\nnetwork.c = 4 4 4 4\n");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_enumerate(opts, out, err), kExitTooLarge);
  EXPECT_NE(err.str().find("matchings"), std::string::npos);
}

TEST_F(CliTest, RateTableListsOccupancies) {
  std::ostringstream out, err;
  const fs::path cfg = write_config("t.conf", "network.K = 2\nnetwork.L = 2\nnetwork.c = 1 1\nnetwork.b = 2\n");
  ASSERT_EQ(cmd_rate_table(cfg, RateUnit::nats, out, err), kExitOk) << err.str();
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "parent,occupancy,child_rate,desirability,unit");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4u);
}

TEST_F(CliTest, VerifySingleSuiteAndMutation) {
  VerifyCliOptions opts;
  opts.only = "lemma2";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify(opts, out, err), kExitOk);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_EQ(text.rfind("lemma2", 0), 0u);

  opts.only = "mcmc";
  opts.flip_acceptance = true;
  std::ostringstream mutated;
  EXPECT_EQ(cmd_verify(opts, mutated, err), kExitFailure);
  EXPECT_NE(mutated.str().find("FAIL"), std::string::npos);

  opts.only = "no-such-suite";
  EXPECT_EQ(cmd_verify(opts, out, err), kExitConfigError);
}

TEST_F(CliTest, ArgumentErrors) {
  const char* argv1[] = {"opshare", "run"};
  EXPECT_EQ(run_cli(2, const_cast<char**>(argv1)), kExitConfigError);
  const char* argv2[] = {"opshare", "verify", "--mutation=other"};
  EXPECT_EQ(run_cli(3, const_cast<char**>(argv2)), kExitConfigError);
  const char* argv3[] = {"opshare", "enumerate", "--config", "/nonexistent.conf"};
  EXPECT_EQ(run_cli(4, const_cast<char**>(argv3)), kExitConfigError);
}

TEST(OutputStem, SanitizesIds) {
  EXPECT_EQ(output_stem("fig-5/L=8"), "fig-5_L_8");
  EXPECT_EQ(output_stem(""), "experiment");
}

}  // namespace
}  // namespace opshare::tools
