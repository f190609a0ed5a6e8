#pragma once

// banditlab sweep|lifelong|nonstat|mortal [--config FILE] [--key value ...]
//
// Exit codes: 0 success, 2 configuration error, 1 anything else.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "banditlab/config.hpp"
#include "banditlab/csv.hpp"
#include "banditlab/error.hpp"
#include "banditlab/experiment.hpp"
#include "banditlab/parallel.hpp"

namespace banditlab {

namespace detail {

inline const std::map<std::string, std::string>& flag_help() {
  static const std::map<std::string, std::string> help = {
      {"arms", "number of arms K"},
      {"horizon", "rounds per episode T (mortal: total steps)"},
      {"episodes", "number of episodes J"},
      {"iters", "Monte Carlo replications M"},
      {"seed", "master seed"},
      {"out", "output CSV path (default: stdout)"},
      {"threads", "worker threads, 0 = all cores (env BANDITLAB_THREADS overrides)"},
      {"prior", "uniform | beta:a,b | abrupt | slow | const:v"},
      {"reward", "bernoulli | gaussian"},
      {"algo", "ucb | moss | subucb (sweep accepts a comma list)"},
      {"gamma", "confidence width in [0,1] (oracle meta / oracle-ucb)"},
      {"delta", "confidence level in (0,1), default 1/T"},
      {"m", "SubUCB subset size (sweep accepts a comma list)"},
      {"init", "initialization 0 | 1 | 2 | 3"},
      {"meta", "greedy | dgreedy | swgreedy | ts | oracle | restart-oracle"},
      {"grid", "cuberoot | sqrt | <points>"},
      {"omega", "DGreedy discount in (0,1]"},
      {"tau", "SWGreedy window in episodes"},
      {"threshold", "DGreedy forced-initialization threshold"},
      {"oracle-iters", "replications per grid point when searching the oracle gamma"},
      {"agent", "mortal agents: ucb,oracle-ucb,pu,epu,ag"},
      {"L", "expected arm lifetime"},
      {"c", "AdaptiveGreedy constant"},
      {"scenario", "mortal prior: uniform | beta13"},
      {"points", "maximum rows per curve"},
  };
  return help;
}

inline void run_plan(const RunPlan& plan, std::ostream& out, std::ostream& err) {
  switch (plan.mode) {
    case Mode::Sweep: {
      write_sweep_header(out);
      for (std::size_t i = 0; i < plan.runs.size(); ++i) {
        const auto& run = plan.runs[i];
        const auto rows = bayes_regret_sweep(run, plan.sweep_gammas);
        write_sweep_rows(out, rows, plan.labels[i], run.arms, run.horizon);
      }
      return;
    }
    case Mode::Lifelong:
    case Mode::NonStationary: {
      const CurveResult result = run_lifelong(plan.runs.front());
      if (result.oracle_gamma) {
        err << "banditlab: oracle gamma = " << format_real(*result.oracle_gamma) << '\n';
      }
      write_lifelong_csv(out, result.curve);
      return;
    }
    case Mode::Mortal: {
      write_mortal_header(out);
      for (std::size_t i = 0; i < plan.runs.size(); ++i) {
        const CurveResult result = run_mortal_experiment(plan.runs[i]);
        write_mortal_rows(out, result.curve, plan.labels[i]);
      }
      return;
    }
  }
}

}  // namespace detail

inline int cli_main(int argc, const char* const* argv, std::ostream& err = std::cerr) {
  CLI::App app{"Lifelong multi-armed bandit experiments", "banditlab"};
  app.require_subcommand(1);

  struct Sub {
    Mode mode;
    CLI::App* app;
    std::string config_path;
    std::map<std::string, std::string> flags;
  };
  std::vector<Sub> subs;
  subs.reserve(4);
  const std::pair<const char*, Mode> names[] = {{"sweep", Mode::Sweep},
                                                {"lifelong", Mode::Lifelong},
                                                {"nonstat", Mode::NonStationary},
                                                {"mortal", Mode::Mortal}};
  const char* descriptions[] = {"Bayesian regret as a function of gamma",
                                "lifelong regret of a meta-algorithm, stationary prior",
                                "lifelong regret under a changing prior",
                                "mortal bandits with geometric arm lifetimes"};
  for (std::size_t i = 0; i < 4; ++i) {
    subs.push_back({names[i].second, app.add_subcommand(names[i].first, descriptions[i]), {}, {}});
  }
  for (auto& sub : subs) {
    sub.app->add_option("--config", sub.config_path, "flat key = value config file");
    for (const auto& key : config_keys()) {
      sub.app->add_option("--" + key, sub.flags[key], detail::flag_help().at(key));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "banditlab: " << e.what() << '\n';
    return 2;
  }

  for (auto& sub : subs) {
    if (!sub.app->parsed()) continue;
    try {
      ConfigMap values;
      if (!sub.config_path.empty()) values = load_config_file(sub.config_path);
      for (const auto& key : config_keys()) {
        if (sub.app->get_option("--" + key)->count() > 0) values[key] = sub.flags[key];
      }
      RunPlan plan = build_plan(sub.mode, values);
      for (auto& run : plan.runs) run.workers = resolve_workers(run.workers);
      for (const auto& note : plan.notes) err << "banditlab: note: " << note << '\n';

      if (plan.output_path.empty()) {
        detail::run_plan(plan, std::cout, err);
      } else {
        std::ostringstream buffer;
        detail::run_plan(plan, buffer, err);
        std::ofstream file(plan.output_path, std::ios::binary);
        if (!file) throw ConfigError("cannot write '" + plan.output_path + "'");
        file << buffer.str();
        if (!file) throw std::runtime_error("write failed: " + plan.output_path);
      }
      return 0;
    } catch (const ConfigError& e) {
      err << "banditlab: config error: " << e.what() << '\n';
      return 2;
    } catch (const ContractViolation& e) {
      err << "banditlab: invalid configuration: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      err << "banditlab: error: " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}

inline int cli_main(const std::vector<std::string>& args, std::ostream& err = std::cerr) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("banditlab");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data(), err);
}

}  // namespace banditlab
