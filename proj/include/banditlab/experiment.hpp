#pragma once

// Monte Carlo drivers for the four experiment families. Replication r always
// draws from RngStream(master_seed, r) and its children, and results are
// reduced in replication order, so output does not depend on worker count.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "banditlab/env.hpp"
#include "banditlab/episode.hpp"
#include "banditlab/error.hpp"
#include "banditlab/meta.hpp"
#include "banditlab/mortal.hpp"
#include "banditlab/parallel.hpp"
#include "banditlab/policies.hpp"
#include "banditlab/rng.hpp"
#include "banditlab/stats.hpp"

namespace banditlab {

enum class Mode { Sweep, Lifelong, NonStationary, Mortal };

// Child-stream tags.
inline constexpr std::uint64_t kTaskStream = 0x7461736bULL;
inline constexpr std::uint64_t kPlayStream = 0x706c6179ULL;
inline constexpr std::uint64_t kMetaStream = 0x6d657461ULL;
inline constexpr std::uint64_t kOracleStream = 0x6f7261636c65ULL;

struct ExperimentConfig {
  Mode mode = Mode::Sweep;
  std::size_t arms = 5;
  std::int64_t horizon = 1000;
  std::int64_t episodes = 100;
  std::size_t iterations = 100;
  PriorSpec prior = PriorSpec::uniform();
  RewardKind reward = RewardKind::Bernoulli;
  SubPolicyConfig sub{};
  MetaConfig meta{};
  std::size_t sweep_points = 21;
  std::size_t oracle_iterations = 500;
  MortalAgentConfig mortal{};
  MortalScenario scenario{};
  std::uint64_t master_seed = 0;
  std::string output_path;
  std::size_t workers = 1;
  std::size_t max_curve_points = 500;

  EpisodeSetting setting() const {
    EpisodeSetting s;
    s.prior = prior;
    s.reward = reward;
    s.arms = arms;
    s.horizon = horizon;
    s.episodes = episodes;
    s.sub = sub;
    s.sub.horizon = horizon;
    return s;
  }
};

/// 4 K T^2 delta^(4 gamma^2) + 2 gamma sqrt(2 K T ln(1/delta)).
inline double theorem1_bound(std::size_t arms, std::int64_t horizon, double gamma,
                             double delta) {
  detail::require(gamma > 0.0, "theorem1_bound: requires gamma > 0");
  detail::require(delta > 0.0 && delta < 1.0, "theorem1_bound: delta must lie in (0, 1)");
  const double K = static_cast<double>(arms);
  const double T = static_cast<double>(horizon);
  const double failure = 4.0 * K * T * T * std::pow(delta, 4.0 * gamma * gamma);
  const double width = 2.0 * gamma * std::sqrt(2.0 * K * T * std::log(1.0 / delta));
  return failure + width;
}

struct SweepRow {
  double gamma = 0.0;
  double mean_regret = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

/// Bayesian regret of the configured sub-policy at each gamma. Replication r
/// uses the same task and stream at every gamma (common random numbers).
inline std::vector<SweepRow> bayes_regret_sweep(const ExperimentConfig& config,
                                                std::span<const double> gammas) {
  detail::require(config.iterations >= 2, "bayes_regret_sweep: requires M >= 2");
  const std::size_t M = config.iterations;
  const EpisodeSetting setting = config.setting();
  std::vector<double> regret(gammas.size() * M);
  const EpisodeHistory no_history;
  parallel_for(regret.size(), config.workers, [&](std::size_t item) {
    const std::size_t g = item / M;
    const std::size_t r = item % M;
    const RngStream base(config.master_seed, r);
    RngStream task_rng = base.derive(kTaskStream);
    RngStream play_rng = base.derive(kPlayStream);
    const TaskInstance task = sample_task(setting.prior, setting.arms, 1, task_rng, setting.reward);
    SubPolicyConfig sub = setting.sub;
    sub.gamma = gammas[g];
    regret[item] = run_episode(sub, task, setting.horizon, no_history, play_rng).pseudo_regret;
  });

  std::vector<SweepRow> rows;
  rows.reserve(gammas.size());
  std::vector<double> column(M);
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    for (std::size_t r = 0; r < M; ++r) column[r] = regret[g * M + r];
    const MeanStderr ms = mean_stderr(column);
    rows.push_back({gammas[g], ms.mean, ms.std_error, M});
  }
  return rows;
}

struct LifelongRun {
  std::vector<double> cumulative_regret;  // at the requested positions
  std::vector<std::size_t> chosen_points;  // grid index per episode
};

/// Gamma grid used by the meta layer of a lifelong run.
inline GammaGrid lifelong_grid(const ExperimentConfig& config) {
  return GammaGrid::uniform(grid_size(config.meta.grid, std::max<std::int64_t>(config.episodes, 2)));
}

/// Oracle gamma for OracleMeta: the configured value, or a brute-force sweep.
inline double resolve_oracle_gamma(const ExperimentConfig& config, const GammaGrid& grid) {
  if (config.meta.oracle_gamma) return *config.meta.oracle_gamma;
  const RngStream oracle_rng = RngStream(config.master_seed, 0).derive(kOracleStream);
  return oracle_gamma(config.setting(), grid, config.oracle_iterations, oracle_rng,
                      config.workers);
}

/// One lifelong replication: J episodes, a fresh task from the episode's
/// prior each time, gamma chosen per episode by the meta-algorithm.
inline LifelongRun run_lifelong_replication(const ExperimentConfig& config,
                                            const MetaConfig& meta_config, const GammaGrid& grid,
                                            std::uint64_t replication,
                                            std::span<const std::int64_t> record_at) {
  const EpisodeSetting setting = config.setting();
  const RngStream base(config.master_seed, replication);
  RngStream meta_rng = base.derive(kMetaStream);
  MetaLearner meta(meta_config, grid);
  EpisodeHistory history;
  const bool keep_history =
      setting.sub.init == InitMode::Init2 || setting.sub.init == InitMode::Init3;

  LifelongRun run;
  run.cumulative_regret.reserve(record_at.size());
  run.chosen_points.reserve(static_cast<std::size_t>(config.episodes));
  std::size_t next_record = 0;
  double cumulative = 0.0;
  const double T = static_cast<double>(setting.horizon);
  for (std::int64_t j = 1; j <= config.episodes; ++j) {
    const std::size_t point = meta.select(j, meta_rng);
    RngStream task_rng = base.derive(kTaskStream, static_cast<std::uint64_t>(j));
    RngStream play_rng = base.derive(kPlayStream, static_cast<std::uint64_t>(j));
    const TaskInstance task = sample_task(setting.prior, setting.arms, j, task_rng, setting.reward);
    SubPolicyConfig sub = setting.sub;
    sub.gamma = grid[point];
    const EpisodeResult result = run_episode(sub, task, setting.horizon, history, play_rng);
    meta.update(point, result.cumulative_reward / T, j, meta_rng);
    if (keep_history) history.append(result.final_empirical_means);

    cumulative += result.pseudo_regret;
    run.chosen_points.push_back(point);
    if (next_record < record_at.size() && record_at[next_record] == j) {
      run.cumulative_regret.push_back(cumulative);
      ++next_record;
    }
  }
  return run;
}

struct CurveResult {
  std::vector<CurvePoint> curve;
  std::optional<double> oracle_gamma;
  std::size_t grid_points = 0;
};

/// Lifelong (or non-stationary) regret curve averaged over M replications.
/// Covers both the Lifelong and NonStationary modes; the prior decides.
inline CurveResult run_lifelong(const ExperimentConfig& config) {
  detail::require(config.episodes >= 1, "run_lifelong: requires J >= 1");
  detail::require(config.iterations >= 2, "run_lifelong: requires M >= 2");
  config.meta.validate();
  MetaConfig meta_config = config.meta;
  CurveResult result;

  GammaGrid grid = lifelong_grid(config);
  if (meta_config.kind == MetaKind::Oracle) {
    const double gamma = resolve_oracle_gamma(config, grid);
    meta_config.oracle_gamma = gamma;
    result.oracle_gamma = gamma;
    // Fixed-gamma runs play exactly the oracle value, on or off the grid.
    grid = GammaGrid::single(gamma);
  }
  if (meta_config.kind == MetaKind::RestartOracle && meta_config.restart_episodes.empty()) {
    meta_config.restart_episodes = schedule_change_episodes(config.prior);
  }
  result.grid_points = grid.size();

  const std::vector<std::int64_t> xs = curve_positions(config.episodes, config.max_curve_points);
  std::vector<Replication> reps(config.iterations);
  parallel_for(config.iterations, config.workers, [&](std::size_t r) {
    reps[r].stream_id = r;
    reps[r].values = run_lifelong_replication(config, meta_config, grid, r, xs).cumulative_regret;
  });
  result.curve = aggregate(std::move(reps), xs);
  return result;
}

/// Mortal-bandit regret curve for one agent, averaged over M replications.
inline CurveResult run_mortal_experiment(const ExperimentConfig& config) {
  detail::require(config.iterations >= 2, "run_mortal_experiment: requires M >= 2");
  config.mortal.validate();
  const std::vector<std::int64_t> xs = curve_positions(config.horizon, config.max_curve_points);
  std::vector<Replication> reps(config.iterations);
  parallel_for(config.iterations, config.workers, [&](std::size_t r) {
    RngStream rng(config.master_seed, r);
    reps[r].stream_id = r;
    reps[r].values = run_mortal(config.mortal, config.scenario, config.horizon, rng, xs)
                         .cumulative_regret;
  });
  CurveResult result;
  result.curve = aggregate(std::move(reps), xs);
  result.grid_points = config.mortal.grid.size();
  return result;
}

}  // namespace banditlab
