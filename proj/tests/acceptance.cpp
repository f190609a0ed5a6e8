// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Experiment runs are scaled down to desk size.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "banditlab/banditlab.hpp"
#include "banditlab/cli.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace banditlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

bool close_rel(double got, double want, double rel = 1e-5) {
  return std::abs(got - want) <= rel * std::abs(want);
}

std::size_t workers() { return resolve_workers(0); }

Outcome index_exactness() {
  const ArmStats s4{4, 2.0, false};
  const ArmStats s10{10, 5.0, false};
  struct Case {
    const char* what;
    double got;
    double want;
  };
  const Case cases[] = {
      {"ucb_index", ucb_index(s4, 1.0, 1e-3), 0.5 + std::sqrt(2.0 * std::log(1000.0) / 4.0)},
      {"moss_index", moss_index(s10, 1.0, 1000, 5), 0.5 + std::sqrt(std::log(20.0) / 10.0)},
      {"mortal_index", mortal_index(s4, 1, 1000, 1.0), 2.35846},
      {"ucb_index", ucb_index(s4, 1.0, 1e-3), 2.35846},
      {"moss_index", moss_index(s10, 1.0, 1000, 5), 1.04733},
      {"theorem1_bound", theorem1_bound(5, 1000, 1.0, 1e-3), 525.652197},
      {"theorem1_bound", theorem1_bound(5, 1000, 0.5, 1e-3), 20262.826088},
  };
  for (const auto& c : cases) {
    if (!close_rel(c.got, c.want)) {
      return {false, std::string(c.what) + fmt(" = %.8g, expected %.8g", c.got, c.want)};
    }
  }
  if (ucb_index(s4, 0.0, 1e-3) != 0.5 || mortal_index(s4, 7, 7, 1.0) != 0.5) {
    return {false, "boundary cases"};
  }
  return {true, "7 hand-evaluated values within 1e-5 relative"};
}

Outcome enumeration_oracle() {
  const double exact = oracle::enumerate_ucb_regret({0.9, 0.1}, 4, 0.0, 0.25);
  const TaskInstance task = TaskInstance::from_means({0.9, 0.1});
  SubPolicyConfig greedy;
  greedy.gamma = 0.0;
  const std::size_t n = 100000;
  std::vector<double> regret(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream rng(20240101, i);
    regret[i] = run_episode(greedy, task, 4, {}, rng).pseudo_regret;
  }
  const MeanStderr ms = mean_stderr(regret);
  // The enumeration is exact, so the combined stderr is the Monte Carlo one.
  const bool ok = std::abs(ms.mean - exact) <= 3.0 * ms.std_error;
  return {ok, fmt("MC %.5f +- %.5f vs exact %.5f", ms.mean, ms.std_error, exact)};
}

ExperimentConfig sweep_config(std::size_t arms, std::size_t iterations, std::uint64_t seed) {
  ExperimentConfig c;
  c.arms = arms;
  c.horizon = 1000;
  c.iterations = iterations;
  c.master_seed = seed;
  c.workers = workers();
  return c;
}

Outcome theorem1() {
  const ExperimentConfig c = sweep_config(5, 2000, 101);
  const std::vector<double> gammas = {0.5, 1.0};
  const auto rows = bayes_regret_sweep(c, gammas);
  std::string detail;
  bool ok = true;
  for (const auto& r : rows) {
    const double bound = theorem1_bound(5, 1000, r.gamma, 1e-3);
    ok = ok && r.mean_regret <= bound;
    detail += fmt("gamma=%.1f: %.2f <= %.2f; ", r.gamma, r.mean_regret, bound);
  }
  return {ok, detail};
}

Outcome tuned_ucb() {
  const ExperimentConfig c = sweep_config(5, 5000, 102);
  const auto rows = bayes_regret_sweep(c, GammaGrid::uniform(21).points);
  std::size_t best = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].mean_regret < rows[best].mean_regret) best = i;
  }
  const double at_one = rows.back().mean_regret;
  const double gain = 1.0 - rows[best].mean_regret / at_one;
  const bool ok = gain >= 0.30 && rows[best].gamma >= 0.1 - 1e-12 && rows[best].gamma <= 0.4 + 1e-12;
  return {ok, fmt("min %.2f at gamma=%.2f, gamma=1 gives %.2f (%.0f%% lower)", rows[best].mean_regret,
                  rows[best].gamma, at_one, 100.0 * gain)};
}

Outcome greedy_many_arms() {
  const ExperimentConfig c = sweep_config(63, 2000, 103);
  const auto rows = bayes_regret_sweep(c, GammaGrid::uniform(21).points);
  const SweepRow& greedy = rows.front();
  double worst_margin = kInfinity;
  double worst_gamma = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double margin = rows[i].mean_regret +
                          2.0 * joint_stderr(greedy.std_error, rows[i].std_error) -
                          greedy.mean_regret;
    if (margin < worst_margin) {
      worst_margin = margin;
      worst_gamma = rows[i].gamma;
    }
  }
  return {worst_margin >= 0.0, fmt("gamma=0 regret %.2f; tightest slack %.2f at gamma=%.2f",
                                   greedy.mean_regret, worst_margin, worst_gamma)};
}

Outcome subucb() {
  const std::vector<double> grid = GammaGrid::uniform(21).points;
  auto best_row = [&](const SubPolicyConfig& sub) {
    ExperimentConfig c = sweep_config(250, 1000, 104);
    c.sub = sub;
    const auto rows = bayes_regret_sweep(c, grid);
    SweepRow best = rows.front();
    for (const auto& r : rows) {
      if (r.mean_regret < best.mean_regret) best = r;
    }
    return best;
  };
  const SweepRow ucb = best_row(SubPolicyConfig{});
  SweepRow sub_best;
  std::size_t sub_m = 0;
  for (std::size_t m : {16u, 63u}) {
    SubPolicyConfig s;
    s.rule = IndexRule::SubUCB;
    s.subsample_m = m;
    const SweepRow r = best_row(s);
    if (sub_m == 0 || r.mean_regret < sub_best.mean_regret) {
      sub_best = r;
      sub_m = m;
    }
  }
  const double js = joint_stderr(ucb.std_error, sub_best.std_error);
  const bool ok = ucb.mean_regret - sub_best.mean_regret > 2.0 * js;
  return {ok, fmt("SubUCB(%.0f) %.1f at gamma=%.2f vs UCB %.1f", static_cast<double>(sub_m),
                  sub_best.mean_regret, sub_best.gamma, ucb.mean_regret) +
                  fmt(" at gamma=%.2f, joint stderr %.2f", ucb.gamma, js)};
}

ExperimentConfig lifelong_config(std::size_t arms, PriorSpec prior, std::uint64_t seed) {
  ExperimentConfig c;
  c.mode = prior.is_schedule() ? Mode::NonStationary : Mode::Lifelong;
  c.arms = arms;
  c.horizon = 1000;
  c.episodes = 2000;
  c.iterations = 20;
  c.prior = prior;
  c.master_seed = seed;
  c.workers = workers();
  return c;
}

CurvePoint final_point(const ExperimentConfig& c) { return run_lifelong(c).curve.back(); }

Outcome lifelong_ordering() {
  ExperimentConfig c = lifelong_config(5, PriorSpec::uniform(), 105);
  c.meta.grid = {GridRule::Sqrt, 0};
  c.oracle_iterations = 1000;

  c.meta.kind = MetaKind::Oracle;
  const CurveResult oracle_run = run_lifelong(c);
  const CurvePoint oracle = oracle_run.curve.back();
  c.meta.kind = MetaKind::Greedy;
  const CurvePoint greedy = final_point(c);
  c.meta.kind = MetaKind::TS;
  const CurvePoint ts = final_point(c);

  const bool ok = oracle.mean <= greedy.mean && greedy.mean < ts.mean &&
                  greedy.mean <= 2.0 * oracle.mean;
  return {ok, fmt("Oracle(gamma=%.3f) %.0f, Greedy %.0f, TS %.0f", *oracle_run.oracle_gamma,
                  oracle.mean, greedy.mean, ts.mean)};
}

Outcome slow_drift() {
  ExperimentConfig c = lifelong_config(10, PriorSpec::slow(2000), 106);
  c.meta.grid = GridSpec::explicit_points(21);
  c.meta.omega = 0.9975;
  c.meta.tau = 200;

  c.meta.kind = MetaKind::Greedy;
  const CurvePoint greedy = final_point(c);
  c.meta.kind = MetaKind::SWGreedy;
  const CurvePoint sw = final_point(c);
  c.meta.kind = MetaKind::DGreedy;
  const CurvePoint d = final_point(c);

  const double js_sw = joint_stderr(greedy.std_error, sw.std_error);
  const double js_d = joint_stderr(greedy.std_error, d.std_error);
  const bool ok = greedy.mean - sw.mean > 2.0 * js_sw && greedy.mean - d.mean > 2.0 * js_d;
  return {ok, fmt("Greedy %.0f, SWGreedy %.0f (2 js %.0f), DGreedy %.0f", greedy.mean, sw.mean,
                  2.0 * js_sw, d.mean) +
                  fmt(" (2 js %.0f)", 2.0 * js_d)};
}

Outcome mortal_ordering() {
  ExperimentConfig c;
  c.mode = Mode::Mortal;
  c.horizon = 40000;
  c.iterations = 20;
  c.scenario = MortalScenario::uniform(5, 200.0);
  c.master_seed = 107;
  c.workers = workers();
  auto final_for = [&](MortalAgentKind kind, double gamma) {
    ExperimentConfig run = c;
    run.mortal.kind = kind;
    run.mortal.gamma = gamma;
    run.mortal.c = 1.5;
    if (kind == MortalAgentKind::PU) run.mortal.known_L = 200;
    return run_mortal_experiment(run).curve.back();
  };
  const CurvePoint plain = final_for(MortalAgentKind::PlainUCB, 1.0);
  const CurvePoint tuned = final_for(MortalAgentKind::OracleUCB, 0.25);
  const CurvePoint pu = final_for(MortalAgentKind::PU, 0.0);
  const CurvePoint epu = final_for(MortalAgentKind::EPU, 0.0);
  const CurvePoint ag = final_for(MortalAgentKind::AdaptiveGreedy, 0.0);

  const double js_ag = joint_stderr(pu.std_error, ag.std_error);
  const double js_epu = joint_stderr(pu.std_error, epu.std_error);
  const bool ok = tuned.mean < plain.mean && ag.mean - pu.mean > 2.0 * js_ag &&
                  std::abs(pu.mean - epu.mean) <= 2.0 * js_epu;
  return {ok, fmt("UCB(1) %.0f, UCB(0.25) %.0f, PU %.0f, EPU %.0f", plain.mean, tuned.mean, pu.mean,
                  epu.mean) +
                  fmt(", AG %.0f; |PU-EPU| %.0f vs 2 js %.0f", ag.mean, std::abs(pu.mean - epu.mean),
                      2.0 * js_epu)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "banditlab_acceptance";
  std::filesystem::create_directories(dir);
  const std::vector<std::vector<std::string>> runs = {
      {"sweep", "--arms", "10", "--iters", "200", "--algo", "ucb,moss,subucb", "--m", "4"},
      {"lifelong", "--episodes", "300", "--horizon", "200", "--iters", "8", "--meta", "ts"},
      {"lifelong", "--episodes", "100", "--horizon", "200", "--iters", "4", "--meta", "oracle",
       "--grid", "11", "--oracle-iters", "40", "--init", "3"},
      {"nonstat", "--prior", "slow", "--episodes", "300", "--horizon", "100", "--iters", "6",
       "--meta", "dgreedy", "--omega", "0.99"},
      {"mortal", "--agent", "ucb,pu,epu,ag", "--L", "50", "--horizon", "5000", "--iters", "6"},
  };
  std::ostringstream err;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::string first;
    for (const char* threads : {"1", "3", "8"}) {
      const auto out = dir / ("run" + std::to_string(i) + "_" + threads + ".csv");
      auto args = runs[i];
      args.insert(args.end(), {"--seed", "99", "--threads", threads, "--out", out.string()});
      if (cli_main(args, err) != 0) return {false, runs[i][0] + " failed: " + err.str()};
      const std::string bytes = slurp(out);
      if (first.empty()) {
        first = bytes;
      } else if (bytes != first) {
        return {false, runs[i][0] + " output differs with " + threads + " workers"};
      }
    }
  }
  return {true, "5 runs x {1, 3, 8} workers byte-identical"};
}

Outcome property_suites() {
  std::size_t checked = 0;
  for (const auto& p : props::all_properties()) {
    const std::string failure = p.check(2026, props::kDefaultCases);
    if (!failure.empty()) return {false, std::string(p.name) + ": " + failure};
    ++checked;
  }
  return {true, std::to_string(checked) + " properties x " +
                    std::to_string(props::kDefaultCases) + " random cases"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"index_exactness", index_exactness},
      {"enumeration_oracle", enumeration_oracle},
      {"theorem1_bound_holds", theorem1},
      {"tuned_ucb_beats_default_gamma", tuned_ucb},
      {"greedy_matches_tuned_ucb_many_arms", greedy_many_arms},
      {"subucb_beats_ucb_250_arms", subucb},
      {"lifelong_meta_ordering", lifelong_ordering},
      {"tracking_meta_beats_greedy_slow_drift", slow_drift},
      {"mortal_agent_ordering", mortal_ordering},
      {"determinism_across_workers", determinism},
      {"property_suites", property_suites},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " (" << fmt("%.1f", secs) << " s): "
              << o.detail << std::endl;
    failures += !o.pass;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
