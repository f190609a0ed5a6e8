#pragma once

// Flat key = value configuration shared by the config file and the CLI flags.
//
//   # comment
//   arms = 5
//   prior = "beta:1,3"
//
// Keys are the long flag names without dashes ("iters", "oracle-iters");
// underscores are accepted in place of dashes. Flags override file values.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "banditlab/env.hpp"
#include "banditlab/error.hpp"
#include "banditlab/experiment.hpp"
#include "banditlab/meta.hpp"
#include "banditlab/mortal.hpp"
#include "banditlab/policies.hpp"

namespace banditlab {

using ConfigMap = std::map<std::string, std::string>;

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "arms",  "horizon", "episodes", "iters",  "seed",     "out",          "threads",
      "prior", "reward",  "algo",     "gamma",  "delta",    "m",            "init",
      "meta",  "grid",    "omega",    "tau",    "threshold", "oracle-iters", "agent",
      "L",     "c",       "scenario", "points"};
  return keys;
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace detail

inline ConfigMap parse_config_text(std::string_view text, const std::string& source = "config") {
  ConfigMap values;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  const auto& keys = config_keys();
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string stripped = detail::trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = detail::normalize_key(detail::trim(stripped.substr(0, eq)));
    std::string value = detail::trim(stripped.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    values[key] = value;
  }
  return values;
}

inline ConfigMap load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

namespace detail {

template <class Int>
Int parse_integer(const std::string& key, const std::string& text, Int lo, Int hi) {
  Int value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || value < lo || value > hi) {
    throw ConfigError("invalid value for '" + key + "': '" + text + "'");
  }
  return value;
}

inline double parse_real(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid value for '" + key + "': '" + text + "'");
  }
}

}  // namespace detail

/// Typed view over a ConfigMap with range checks.
class ConfigReader {
 public:
  explicit ConfigReader(const ConfigMap& values) : values_(values) {}

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::optional<std::string> text(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }
  std::string text_or(const std::string& key, std::string fallback) const {
    return text(key).value_or(std::move(fallback));
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t lo,
                       std::int64_t hi = INT64_MAX) const {
    auto t = text(key);
    if (!t) return fallback;
    return detail::parse_integer<std::int64_t>(key, *t, lo, hi);
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    auto t = text(key);
    if (!t) return fallback;
    return detail::parse_integer<std::uint64_t>(key, *t, 0, UINT64_MAX);
  }

  /// Real in [lo, hi] (or (lo, hi] / [lo, hi) when the bound is open).
  double real(const std::string& key, double fallback, double lo, double hi,
              bool lo_open = false, bool hi_open = false) const {
    auto t = text(key);
    if (!t) return fallback;
    const double v = detail::parse_real(key, *t);
    const bool ok = (lo_open ? v > lo : v >= lo) && (hi_open ? v < hi : v <= hi);
    if (!ok) throw ConfigError("value for '" + key + "' out of range: " + *t);
    return v;
  }

  std::optional<double> optional_real(const std::string& key, double lo, double hi,
                                      bool lo_open = false, bool hi_open = false) const {
    if (!has(key)) return std::nullopt;
    return real(key, 0.0, lo, hi, lo_open, hi_open);
  }

 private:
  const ConfigMap& values_;
};

inline PriorSpec parse_prior(const std::string& text, std::int64_t episodes) {
  if (text == "uniform") return PriorSpec::uniform();
  if (text == "abrupt" || text == "slow") {
    if (episodes < 3) throw ConfigError("prior '" + text + "' requires episodes >= 3");
    return text == "abrupt" ? PriorSpec::abrupt(episodes) : PriorSpec::slow(episodes);
  }
  if (text.rfind("beta:", 0) == 0) {
    const auto parts = detail::split(std::string_view(text).substr(5), ',');
    if (parts.size() != 2) throw ConfigError("prior must be beta:a,b, got '" + text + "'");
    const double a = detail::parse_real("prior", parts[0]);
    const double b = detail::parse_real("prior", parts[1]);
    if (!(a > 0.0 && b > 0.0)) throw ConfigError("Beta prior parameters must be positive");
    return PriorSpec::beta(a, b);
  }
  if (text.rfind("const:", 0) == 0) {
    const double v = detail::parse_real("prior", text.substr(6));
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("constant prior must lie in [0, 1]");
    return PriorSpec::constant(v);
  }
  throw ConfigError("unknown prior '" + text + "' (uniform | beta:a,b | abrupt | slow | const:v)");
}

inline RewardKind parse_reward(const std::string& text) {
  if (text == "bernoulli") return RewardKind::Bernoulli;
  if (text == "gaussian") return RewardKind::Gaussian;
  throw ConfigError("unknown reward '" + text + "' (bernoulli | gaussian)");
}

inline InitMode parse_init(const std::string& text) {
  if (text == "0") return InitMode::Init0;
  if (text == "1") return InitMode::Init1;
  if (text == "2") return InitMode::Init2;
  if (text == "3") return InitMode::Init3;
  throw ConfigError("init must be 0, 1, 2 or 3, got '" + text + "'");
}

inline MetaKind parse_meta(const std::string& text) {
  for (MetaKind k : {MetaKind::Greedy, MetaKind::DGreedy, MetaKind::SWGreedy, MetaKind::TS,
                     MetaKind::Oracle, MetaKind::RestartOracle}) {
    if (meta_kind_name(k) == text) return k;
  }
  throw ConfigError("unknown meta '" + text +
                    "' (greedy | dgreedy | swgreedy | ts | oracle | restart-oracle)");
}

inline GridSpec parse_grid(const std::string& text) {
  if (text == "cuberoot") return {GridRule::CubeRoot, 0};
  if (text == "sqrt") return {GridRule::Sqrt, 0};
  const auto n = detail::parse_integer<std::size_t>("grid", text, 2, 1000000);
  return GridSpec::explicit_points(n);
}

inline MortalAgentKind parse_agent(const std::string& text) {
  if (text == "ucb") return MortalAgentKind::PlainUCB;
  if (text == "oracle-ucb") return MortalAgentKind::OracleUCB;
  if (text == "pu") return MortalAgentKind::PU;
  if (text == "epu") return MortalAgentKind::EPU;
  if (text == "ag") return MortalAgentKind::AdaptiveGreedy;
  throw ConfigError("unknown agent '" + text + "' (ucb | oracle-ucb | pu | epu | ag)");
}

/// Everything the CLI needs to run one subcommand.
struct RunPlan {
  Mode mode = Mode::Sweep;
  std::vector<ExperimentConfig> runs;  // one per algo (sweep) or agent (mortal)
  std::vector<std::string> labels;
  std::vector<double> sweep_gammas;
  std::string output_path;
  std::vector<std::string> notes;  // printed on the diagnostic stream
};

namespace detail {

inline void validate_sub_policy(const ExperimentConfig& run) {
  try {
    run.sub.validate(run.arms);
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  const std::size_t initial_pulls =
      run.sub.rule == IndexRule::SubUCB ? run.sub.subsample_m : run.arms;
  if (run.sub.init == InitMode::Init0 &&
      run.horizon < static_cast<std::int64_t>(initial_pulls)) {
    throw ConfigError("horizon is shorter than the initialization phase");
  }
}

}  // namespace detail

inline std::size_t default_iterations(Mode mode) { return mode == Mode::Sweep ? 5000 : 100; }

/// Validates every key relevant to `mode` and expands list-valued keys
/// (algo, m, agent) into individual runs.
inline RunPlan build_plan(Mode mode, const ConfigMap& values) {
  const ConfigReader cfg(values);
  RunPlan plan;
  plan.mode = mode;
  plan.output_path = cfg.text_or("out", "");

  ExperimentConfig base;
  base.mode = mode;
  base.arms = static_cast<std::size_t>(cfg.integer("arms", 5, 2, 1000000));
  base.iterations = static_cast<std::size_t>(
      cfg.integer("iters", static_cast<std::int64_t>(default_iterations(mode)), 2));
  base.master_seed = cfg.unsigned_integer("seed", 0);
  base.workers = static_cast<std::size_t>(cfg.integer("threads", 1, 0, 4096));
  base.max_curve_points = static_cast<std::size_t>(cfg.integer("points", 500, 2));
  base.output_path = plan.output_path;
  base.reward = parse_reward(cfg.text_or("reward", "bernoulli"));

  const double gamma = cfg.real("gamma", 1.0, 0.0, 1.0);
  const std::optional<double> delta = cfg.optional_real("delta", 0.0, 1.0, true, true);

  if (mode == Mode::Mortal) {
    const double lifetime = static_cast<double>(cfg.integer("L", 1000, 1));
    base.horizon = cfg.integer("horizon", static_cast<std::int64_t>(1000 * lifetime), 1);
    const std::string scenario = cfg.text_or("scenario", "uniform");
    if (scenario == "uniform") {
      base.scenario = MortalScenario::uniform(base.arms, lifetime);
    } else if (scenario == "beta13") {
      base.scenario = MortalScenario::beta13(base.arms, lifetime);
    } else {
      throw ConfigError("unknown scenario '" + scenario + "' (uniform | beta13)");
    }
    const double c = cfg.real("c", scenario == "uniform" ? 1.5 : 2.5, 0.0, 1e9, true);
    const GridSpec grid = parse_grid(cfg.text_or("grid", "32"));
    const std::size_t n = grid_size(grid, 1000);
    for (const auto& name : detail::split(cfg.text_or("agent", "pu"), ',')) {
      ExperimentConfig run = base;
      MortalAgentConfig agent;
      agent.kind = parse_agent(name);
      agent.c = c;
      agent.grid = GammaGrid::uniform(n);
      if (agent.kind == MortalAgentKind::PlainUCB) agent.gamma = 1.0;
      if (agent.kind == MortalAgentKind::OracleUCB) agent.gamma = cfg.real("gamma", 0.25, 0.0, 1.0);
      if (agent.kind == MortalAgentKind::PU) {
        agent.known_L = static_cast<std::int64_t>(lifetime);
      }
      run.mortal = agent;
      plan.labels.push_back(agent.name());
      plan.runs.push_back(run);
    }
    return plan;
  }

  base.horizon = cfg.integer("horizon", 1000, 1);
  base.episodes = cfg.integer("episodes", mode == Mode::Sweep ? 1 : 10000, 1);
  base.prior = parse_prior(cfg.text_or("prior", mode == Mode::NonStationary ? "abrupt" : "uniform"),
                           base.episodes);
  if (mode == Mode::NonStationary && !base.prior.is_schedule()) {
    throw ConfigError("nonstat requires prior = abrupt or slow");
  }
  base.sub.gamma = gamma;
  base.sub.delta = delta;
  base.sub.horizon = base.horizon;
  base.sub.init = parse_init(cfg.text_or("init", "0"));

  if (mode == Mode::Sweep) {
    const GridSpec grid = parse_grid(cfg.text_or("grid", "21"));
    plan.sweep_gammas = GammaGrid::uniform(grid_size(grid, std::max<std::int64_t>(base.episodes, 2))).points;
    std::vector<std::string> ms = detail::split(cfg.text_or("m", ""), ',');
    for (auto name : detail::split(cfg.text_or("algo", "ucb"), ',')) {
      ExperimentConfig run = base;
      if (name == "adaucb") {
        plan.notes.push_back("adaucb is not implemented; substituting moss");
        name = "moss";
      }
      if (name == "ucb") {
        run.sub.rule = IndexRule::UCB;
      } else if (name == "moss") {
        run.sub.rule = IndexRule::MOSS;
      } else if (name == "subucb") {
        if (ms.size() == 1 && ms[0].empty()) throw ConfigError("algo subucb requires m");
        for (const auto& m_text : ms) {
          ExperimentConfig sub_run = run;
          sub_run.sub.rule = IndexRule::SubUCB;
          sub_run.sub.subsample_m = detail::parse_integer<std::size_t>("m", m_text, 1, base.arms);
          plan.labels.push_back(sub_run.sub.name());
          plan.runs.push_back(sub_run);
        }
        continue;
      } else {
        throw ConfigError("unknown algo '" + name + "' (ucb | moss | subucb)");
      }
      plan.labels.push_back(run.sub.name());
      plan.runs.push_back(run);
    }
    for (const auto& run : plan.runs) detail::validate_sub_policy(run);
    return plan;
  }

  // Lifelong and non-stationary runs: one sub-policy, one meta-algorithm.
  const std::string algo = cfg.text_or("algo", "ucb");
  if (algo == "ucb") {
    base.sub.rule = IndexRule::UCB;
  } else if (algo == "moss" || algo == "adaucb") {
    if (algo == "adaucb") plan.notes.push_back("adaucb is not implemented; substituting moss");
    base.sub.rule = IndexRule::MOSS;
  } else if (algo == "subucb") {
    base.sub.rule = IndexRule::SubUCB;
    if (!cfg.has("m")) throw ConfigError("algo subucb requires m");
    base.sub.subsample_m =
        detail::parse_integer<std::size_t>("m", *cfg.text("m"), 1, base.arms);
  } else {
    throw ConfigError("unknown algo '" + algo + "' (ucb | moss | subucb)");
  }

  MetaConfig& meta = base.meta;
  meta.kind = parse_meta(cfg.text_or("meta", "greedy"));
  meta.omega = cfg.real("omega", 0.9975, 0.0, 1.0, true);
  meta.tau = cfg.integer("tau", 1000, 1);
  meta.forced_init_threshold = cfg.real("threshold", 1.0, 0.0, 1e9, true);
  meta.grid = parse_grid(cfg.text_or("grid", mode == Mode::NonStationary ? "21" : "sqrt"));
  if (meta.kind == MetaKind::Oracle && cfg.has("gamma")) meta.oracle_gamma = gamma;
  base.oracle_iterations = static_cast<std::size_t>(cfg.integer("oracle-iters", 500, 1));
  detail::validate_sub_policy(base);
  plan.labels.push_back(meta_kind_name(meta.kind));
  plan.runs.push_back(base);
  return plan;
}

}  // namespace banditlab
