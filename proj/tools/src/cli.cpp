#include "opshare/tools/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "opshare/errors.hpp"
#include "opshare/result_io.hpp"
#include "opshare/tools/config_file.hpp"
#include "opshare/tools/verify.hpp"
#include "opshare/welfare.hpp"

namespace opshare::tools {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::filesystem::path output_dir(const RunOptions& opts) {
  if (opts.out_dir) return *opts.out_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "opshare-results";
}

// Power pmfs for the commands that evaluate a single rate table. Learned pmfs
// only exist inside a trial, so q-learning falls back to full power here.
RateTable fixed_power_table(const ExperimentSpec& spec) {
  const auto& cfg = spec.network;
  const auto pmf = spec.power_mode == PowerMode::uniform
                       ? PowerPmf::uniform(cfg.power_levels)
                       : PowerPmf::degenerate(cfg.power_levels, cfg.power_levels - 1);
  return RateTable::homogeneous(cfg, pmf, spec.rate);
}

std::string describe(const Matching& m) {
  std::string s;
  for (std::size_t c = 0; c < m.child_count(); ++c) {
    const auto rb = m.rb_of(ChildId{c});
    s += (c ? " " : "") + std::to_string(c) + ":" + (rb ? std::to_string(rb->value) : "-");
  }
  return s;
}

}  // namespace

std::string output_stem(const std::string& experiment_id) {
  std::string stem = experiment_id;
  for (char& ch : stem) {
    const bool keep = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' ||
                      ch == '-';
    if (!keep) ch = '_';
  }
  return stem.empty() ? "experiment" : stem;
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(opts.config);
    if (opts.seed) cfg.spec.seed = *opts.seed;
    if (opts.jobs) cfg.spec.jobs = *opts.jobs;
    if (opts.unit) cfg.unit = *opts.unit;
    cfg.spec.validate();
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  try {
    auto sets = run_experiment(cfg.spec);
    for (auto& set : sets) set = convert_units(std::move(set), cfg.unit);
    const auto paths = write_results(output_dir(opts), output_stem(cfg.spec.id), sets);
    for (const auto& set : sets) {
      out << set.experiment_id << ": " << set.samples.size() << " trials, mean " << fmt(set.mean()) << ", median "
          << fmt(set.median()) << " " << to_string(set.unit) << "/s/Hz";
      if (!set.failures.empty()) out << ", " << set.failures.size() << " failed";
      out << '\n';
      for (const auto& f : set.failures) err << "trial seed " << f.seed << " failed: " << f.message << '\n';
    }
    out << "wrote " << paths.csv.string() << " and " << paths.sidecar.string() << '\n';
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_verify(const VerifyCliOptions& opts, std::ostream& out, std::ostream& err) {
  VerifyOptions vo;
  vo.flip_acceptance = opts.flip_acceptance;
  if (opts.seed) vo.seed = *opts.seed;
  std::vector<std::string> names = suite_names();
  if (opts.only) {
    if (std::find(names.begin(), names.end(), *opts.only) == names.end()) {
      err << "unknown suite '" << *opts.only << "'; available:";
      for (const auto& n : names) err << ' ' << n;
      err << '\n';
      return kExitConfigError;
    }
    names = {*opts.only};
  }
  bool all = true;
  for (const auto& name : names) {
    SuiteOutcome outcome;
    try {
      outcome = run_suite(name, vo);
    } catch (const std::exception& e) {
      outcome = {name, false, std::string("exception: ") + e.what()};
    }
    all = all && outcome.passed;
    char line[64];
    std::snprintf(line, sizeof line, "%-12s %s  ", outcome.name.c_str(), outcome.passed ? "PASS" : "FAIL");
    out << line << outcome.detail << '\n';
  }
  return all ? kExitOk : kExitFailure;
}

int cmd_enumerate(const EnumerateOptions& opts, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(opts.config);
    if (opts.unit) cfg.unit = *opts.unit;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  try {
    const auto& net = cfg.spec.network;
    const double count = count_matchings(net.total_demand(), net.supply);
    if (count > opts.limit) {
      err << "instance too large: " << fmt(count) << " matchings (limit " << fmt(opts.limit) << ")\n";
      return kExitTooLarge;
    }
    const RateTable rates = fixed_power_table(cfg.spec);
    const auto all = enumerate_matchings(build_augmented(net), net.supply);
    const auto unit = cfg.unit;
    out << "# " << all.size() << " matchings; child:rb, potential, welfare (" << to_string(unit)
        << "/s/Hz), stable\n";
    std::size_t stable = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto report = social_welfare(all[i], rates);
      const bool is_stable = is_pairwise_stable(all[i], rates).stable;
      stable += is_stable ? 1 : 0;
      out << i << "  " << describe(all[i]) << "  " << fmt(convert_rate(report.potential, unit)) << "  "
          << fmt(convert_rate(report.social_welfare, unit)) << "  " << (is_stable ? "stable" : "-") << '\n';
    }
    const auto best = maximize(all, rates, Objective::social_welfare);
    out << "stable matchings: " << stable << '\n';
    out << "welfare maximizer: " << describe(best.matchings.front()) << "  welfare "
        << fmt(convert_rate(best.value, unit)) << " (" << best.matchings.size() << " tied)\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_rate_table(const std::filesystem::path& config, std::optional<RateUnit> unit_override, std::ostream& out,
                   std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config);
    if (unit_override) cfg.unit = *unit_override;
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }
  try {
    const RateTable rates = fixed_power_table(cfg.spec);
    out << "parent,occupancy,child_rate,desirability,unit\n";
    for (std::size_t k = 0; k < rates.parent_count(); ++k)
      for (std::size_t occ = 1; occ <= rates.max_occupancy(); ++occ)
        out << k << ',' << occ << ',' << fmt(convert_rate(rates.child_rate(k, occ), cfg.unit)) << ','
            << fmt(convert_rate(rates.desirability(k, occ), cfg.unit)) << ',' << to_string(cfg.unit) << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Multi-operator spectrum sharing simulator"};
  app.require_subcommand(1);

  std::string unit_text;
  const auto unit_option = [&]() -> std::optional<RateUnit> {
    if (unit_text.empty()) return std::nullopt;
    return parse_rate_unit(unit_text.c_str());
  };

  RunOptions run;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::size_t jobs = 0;
  auto* run_cmd = app.add_subcommand("run", "Run the configured experiment and write CSV + JSON results");
  run_cmd->add_option("--config", run.config, "Configuration file")->required();
  auto* out_opt = run_cmd->add_option("--out", out_dir, "Output directory (default $OPSHARE_OUTPUT_DIR)");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "Override experiment.seed");
  auto* jobs_opt = run_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");
  run_cmd->add_option("--unit", unit_text, "Rate unit: bits or nats")->check(CLI::IsMember({"bits", "nats"}));

  VerifyCliOptions verify;
  std::string only;
  std::string mutation;
  std::uint64_t verify_seed = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run the property and oracle suites");
  auto* only_opt = verify_cmd->add_option("--only", only, "Run a single suite");
  verify_cmd->add_option("--mutation", mutation, "Inject a known bug")->check(CLI::IsMember({"flip-acceptance"}));
  auto* verify_seed_opt = verify_cmd->add_option("--seed", verify_seed, "Seed for the random instances");

  EnumerateOptions enumerate;
  auto* enum_cmd = app.add_subcommand("enumerate", "List every matching of a small instance");
  enum_cmd->add_option("--config", enumerate.config, "Configuration file")->required();
  enum_cmd->add_option("--unit", unit_text, "Rate unit: bits or nats")->check(CLI::IsMember({"bits", "nats"}));

  std::filesystem::path table_config;
  auto* table_cmd = app.add_subcommand("rate-table", "Print child rates per parent and RB occupancy");
  table_cmd->add_option("--config", table_config, "Configuration file")->required();
  table_cmd->add_option("--unit", unit_text, "Rate unit: bits or nats")->check(CLI::IsMember({"bits", "nats"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  if (*run_cmd) {
    if (*out_opt) run.out_dir = out_dir;
    if (*seed_opt) run.seed = seed;
    if (*jobs_opt) run.jobs = jobs;
    run.unit = unit_option();
    return cmd_run(run, std::cout, std::cerr);
  }
  if (*verify_cmd) {
    if (*only_opt) verify.only = only;
    if (*verify_seed_opt) verify.seed = verify_seed;
    verify.flip_acceptance = mutation == "flip-acceptance";
    return cmd_verify(verify, std::cout, std::cerr);
  }
  if (*enum_cmd) {
    enumerate.unit = unit_option();
    return cmd_enumerate(enumerate, std::cout, std::cerr);
  }
  return cmd_rate_table(table_config, unit_option(), std::cout, std::cerr);
}

}  // namespace opshare::tools
