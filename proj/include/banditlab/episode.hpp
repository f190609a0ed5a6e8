#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "banditlab/env.hpp"
#include "banditlab/policies.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

struct EpisodeResult {
  double cumulative_reward = 0.0;
  double pseudo_regret = 0.0;
  /// Per-arm empirical means at the end of the episode, virtual seeds
  /// included; NaN for arms that were never observed.
  std::vector<double> final_empirical_means;
  std::vector<std::int64_t> final_counts;  // virtual seeds count as one
};

/// Plays one task for `horizon` rounds with a single sub-policy.
///
/// Index values depend only on an arm's own statistics (delta and T are fixed
/// for the episode), so they are cached and refreshed for the pulled arm only.
inline EpisodeResult run_episode(SubPolicyConfig config, const TaskInstance& task,
                                 std::int64_t horizon, const EpisodeHistory& history,
                                 RngStream& rng) {
  const std::size_t arms = task.arms();
  config.horizon = horizon;
  config.validate(arms);

  std::vector<std::size_t> eligible;
  if (config.rule == IndexRule::SubUCB) {
    eligible = subsample_arms(arms, config.subsample_m, rng);
  } else {
    eligible.resize(arms);
    std::iota(eligible.begin(), eligible.end(), std::size_t{0});
  }
  if (config.init == InitMode::Init0) {
    detail::require(horizon >= static_cast<std::int64_t>(eligible.size()),
                    "run_episode: horizon shorter than the initialization phase");
  }

  std::vector<ArmStats> stats = init_episode(config, arms, history);
  std::vector<double> index(arms, -kInfinity);
  for (std::size_t k : eligible) index[k] = policy_index(config, stats[k], arms);

  EpisodeResult result;
  for (std::int64_t t = 0; t < horizon; ++t) {
    const std::size_t arm = argmax_random_tie(index, eligible, rng);
    const double reward = sample_reward(task.reward, task.means[arm], rng);
    stats[arm] = update_stats(stats[arm], reward);
    index[arm] = policy_index(config, stats[arm], arms);
    result.cumulative_reward += reward;
    result.pseudo_regret += task.best_mean - task.means[arm];
  }

  result.final_empirical_means.resize(arms);
  result.final_counts.resize(arms);
  for (std::size_t k = 0; k < arms; ++k) {
    result.final_counts[k] = stats[k].count;
    result.final_empirical_means[k] =
        stats[k].count > 0 ? stats[k].mean() : std::numeric_limits<double>::quiet_NaN();
  }
  return result;
}

}  // namespace banditlab
