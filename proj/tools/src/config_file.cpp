#include "opshare/tools/config_file.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "opshare/errors.hpp"

namespace opshare::tools {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> tokens(const std::string& value) {
  std::string spaced = value;
  for (char& ch : spaced)
    if (ch == ',') ch = ' ';
  std::istringstream in(spaced);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

struct Entry {
  std::string value;
  std::string where;  // "source:line"
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  const Entry& require(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError("missing required key '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  // Applies `fn` to the value if the key is present.
  void maybe(const std::string& key, const std::function<void(const std::string&)>& fn) {
    if (!has(key)) return;
    const Entry& e = require(key);
    try {
      fn(e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(e.where + ": key '" + key + "': " + err.what());
    } catch (const std::exception& err) {
      throw ConfigError(e.where + ": key '" + key + "': " + err.what());
    }
  }

  template <class Fn>
  void required(const std::string& key, Fn fn) {
    require(key);
    maybe(key, fn);
  }

  void reject_unknown() const {
    for (const auto& [key, entry] : entries_)
      if (!used_.count(key)) throw ConfigError(entry.where + ": unknown key '" + key + "'");
  }

 private:
  std::map<std::string, Entry> entries_;
  std::set<std::string> used_;
};

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ConfigError("expected a number, got '" + s + "'");
  return v;
}

std::uint64_t to_uint(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ConfigError("expected a nonnegative integer, got '" + s + "'");
  return v;
}

std::string single(const std::string& value) {
  const auto t = tokens(value);
  if (t.size() != 1) throw ConfigError("expected a single value, got '" + value + "'");
  return t.front();
}

std::vector<std::size_t> uint_list(const std::string& value) {
  std::vector<std::size_t> out;
  for (const auto& t : tokens(value)) out.push_back(static_cast<std::size_t>(to_uint(t)));
  if (out.empty()) throw ConfigError("expected a list of integers");
  return out;
}

std::vector<double> double_list(const std::string& value) {
  std::vector<double> out;
  for (const auto& t : tokens(value)) out.push_back(to_double(t));
  if (out.empty()) throw ConfigError("expected a list of numbers");
  return out;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (value.empty()) throw ConfigError(where + ": key '" + key + "' has no value");
    if (entries.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    entries[key] = {value, where};
  }

  Reader r(std::move(entries));
  RunConfig out;
  ExperimentSpec& spec = out.spec;
  NetworkConfig& n = spec.network;

  r.required("network.K", [&](const std::string& v) { n.num_operators = to_uint(single(v)); });
  r.required("network.L", [&](const std::string& v) { n.num_rbs = to_uint(single(v)); });
  r.required("network.c", [&](const std::string& v) { n.demand = uint_list(v); });
  n.supply.assign(n.num_rbs, 4);
  r.maybe("network.b", [&](const std::string& v) {
    auto b = uint_list(v);
    if (b.size() == 1) b.assign(n.num_rbs, b.front());
    n.supply = std::move(b);
  });
  r.maybe("network.lambda", [&](const std::string& v) { n.sbs_intensity = to_double(single(v)); });
  r.maybe("network.area_radius", [&](const std::string& v) { n.area_radius_m = to_double(single(v)); });
  r.maybe("network.r_c", [&](const std::string& v) { n.ue_radius_m = to_double(single(v)); });
  r.maybe("network.alpha", [&](const std::string& v) { n.pathloss_exponent = to_double(single(v)); });
  r.maybe("network.eta", [&](const std::string& v) { n.fading_rate = to_double(single(v)); });
  r.maybe("network.noise_dbm", [&](const std::string& v) { n.noise_power_w = dbm_to_watts(to_double(single(v))); });
  r.maybe("network.p_tot_dbm", [&](const std::string& v) { n.max_power_w = dbm_to_watts(to_double(single(v))); });
  r.maybe("network.power_levels", [&](const std::string& v) { n.power_levels = to_uint(single(v)); });
  r.maybe("network.sinr_th_db", [&](const std::string& v) { n.sinr_threshold = db_to_linear(to_double(single(v))); });
  r.maybe("network.rho_op", [&](const std::string& v) { n.operator_weights = double_list(v); });
  r.maybe("network.rho_sbs", [&](const std::string& v) { n.sbs_weight = to_double(single(v)); });

  r.maybe("channel.mode", [&](const std::string& v) {
    const auto mode = single(v);
    if (mode == "analytic") spec.learning_channel = ChannelMode::analytic;
    else if (mode == "empirical") spec.learning_channel = ChannelMode::empirical;
    else throw ConfigError("expected analytic or empirical");
  });
  r.maybe("channel.pathloss.direct_intercept_db",
          [&](const std::string& v) { n.pathloss.direct_intercept_db = to_double(single(v)); });
  r.maybe("channel.pathloss.direct_slope_db",
          [&](const std::string& v) { n.pathloss.direct_slope_db = to_double(single(v)); });
  r.maybe("channel.pathloss.cross_intercept_db",
          [&](const std::string& v) { n.pathloss.cross_intercept_db = to_double(single(v)); });
  r.maybe("channel.pathloss.cross_slope_db",
          [&](const std::string& v) { n.pathloss.cross_slope_db = to_double(single(v)); });
  r.maybe("channel.pathloss.wall_db", [&](const std::string& v) { n.pathloss.wall_loss_db = to_double(single(v)); });
  r.maybe("channel.pathloss.min_distance_m",
          [&](const std::string& v) { n.pathloss.min_distance_m = to_double(single(v)); });
  r.maybe("channel.shadow_sigma_db", [&](const std::string& v) { n.shadowing_std_db = to_double(single(v)); });

  r.maybe("matching.T_b", [&](const std::string& v) { n.acceptance_sharpness = to_double(single(v)); });
  r.maybe("matching.algorithm", [&](const std::string& v) { spec.algorithm = parse_algorithm(single(v)); });

  auto& q = n.learning;
  r.maybe("qlearning.gamma", [&](const std::string& v) { q.discount = to_double(single(v)); });
  r.maybe("qlearning.epsilon", [&](const std::string& v) { q.epsilon = to_double(single(v)); });
  r.maybe("qlearning.T_p", [&](const std::string& v) { q.boltzmann_temperature = to_double(single(v)); });
  r.maybe("qlearning.beta", [&](const std::string& v) {
    const auto s = single(v);
    if (s == "harmonic") {
      q.rate.kind = LearningRate::Kind::harmonic;
    } else {
      q.rate.kind = LearningRate::Kind::constant;
      q.rate.value = to_double(s);
    }
  });
  r.maybe("qlearning.max_operator", [&](const std::string& v) {
    const auto s = single(v);
    if (s == "all") q.max_operator = MaxOperator::all_actions;
    else if (s == "exclude-taken") q.max_operator = MaxOperator::exclude_taken;
    else throw ConfigError("expected all or exclude-taken");
  });
  r.maybe("qlearning.pmf_estimate", [&](const std::string& v) {
    const auto s = single(v);
    if (s == "empirical") q.pmf_estimate = PmfEstimate::empirical_window;
    else if (s == "policy") q.pmf_estimate = PmfEstimate::exact_policy;
    else throw ConfigError("expected empirical or policy");
  });
  r.maybe("qlearning.pmf_window", [&](const std::string& v) { q.pmf_window = to_uint(single(v)); });
  r.maybe("qlearning.epoch_steps", [&](const std::string& v) { spec.epoch_steps = to_uint(single(v)); });

  r.maybe("experiment.id", [&](const std::string& v) { spec.id = v; });
  r.maybe("experiment.kind", [&](const std::string& v) { spec.kind = parse_experiment_kind(single(v)); });
  r.maybe("experiment.trials", [&](const std::string& v) { spec.trials = to_uint(single(v)); });
  r.maybe("experiment.iterations", [&](const std::string& v) { spec.iterations = to_uint(single(v)); });
  r.maybe("experiment.power_mode", [&](const std::string& v) { spec.power_mode = parse_power_mode(single(v)); });
  r.maybe("experiment.seed", [&](const std::string& v) { spec.seed = to_uint(single(v)); });
  r.maybe("experiment.L_grid", [&](const std::string& v) { spec.rb_grid = uint_list(v); });
  r.maybe("experiment.demand_grid", [&](const std::string& v) {
    std::istringstream parts(v);
    for (std::string part; std::getline(parts, part, ';');) spec.demand_grid.push_back(uint_list(part));
  });
  r.maybe("experiment.radius_grid", [&](const std::string& v) { spec.radius_grid = double_list(v); });

  r.maybe("rate.integrand", [&](const std::string& v) {
    const auto s = single(v);
    if (s == "corrected") spec.rate.integrand = RateIntegrand::corrected;
    else if (s == "as-printed") spec.rate.integrand = RateIntegrand::as_printed;
    else throw ConfigError("expected corrected or as-printed");
  });
  r.maybe("rate.decondition", [&](const std::string& v) {
    const auto s = single(v);
    if (s == "interchanged") spec.rate.decondition = DeconditionMethod::interchanged;
    else if (s == "nested") spec.rate.decondition = DeconditionMethod::nested;
    else throw ConfigError("expected interchanged or nested");
  });

  r.maybe("output.unit", [&](const std::string& v) { out.unit = parse_rate_unit(single(v).c_str()); });

  r.reject_unknown();
  if (q.epsilon < 0.0 || q.epsilon > 1.0) throw ConfigError("invalid configuration: epsilon must lie in [0, 1]");
  if (q.discount < 0.0 || q.discount > 1.0) throw ConfigError("invalid configuration: gamma must lie in [0, 1]");
  if (n.power_levels < 1) throw ConfigError("invalid configuration: power_levels must be at least 1");
  spec.validate();
  return out;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

}  // namespace opshare::tools
