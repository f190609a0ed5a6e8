#pragma once

// Within-episode index policies: UCB(gamma), MOSS(gamma), SubUCB(m) and
// Greedy (UCB with gamma = 0), plus the episode initialization rules.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "banditlab/error.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct ArmStats {
  std::int64_t count = 0;
  double reward_sum = 0.0;
  bool virtual_seed = false;  // seeded by Init1..Init3

  double mean() const { return reward_sum / static_cast<double>(count); }
};

enum class IndexRule { UCB, MOSS, SubUCB };

// Init0 pulls every arm once; Init1..3 seed one virtual observation whose
// value is 0, the mean, or the median of earlier episodes' empirical means.
enum class InitMode { Init0, Init1, Init2, Init3 };

struct SubPolicyConfig {
  IndexRule rule = IndexRule::UCB;
  double gamma = 1.0;
  std::optional<double> delta;  // defaults to 1/horizon
  std::size_t subsample_m = 0;
  InitMode init = InitMode::Init0;
  std::int64_t horizon = 1000;

  double effective_delta() const {
    return delta.value_or(1.0 / static_cast<double>(horizon));
  }

  void validate(std::size_t arms) const {
    detail::require(gamma >= 0.0 && gamma <= 1.0, "gamma must lie in [0, 1]");
    const double d = effective_delta();
    detail::require(d > 0.0 && d < 1.0, "delta must lie in (0, 1)");
    detail::require(horizon >= 1, "horizon must be positive");
    if (rule == IndexRule::SubUCB) {
      detail::require(subsample_m >= 1 && subsample_m <= arms,
                      "SubUCB needs 1 <= m <= K");
    }
  }

  std::string name() const {
    switch (rule) {
      case IndexRule::UCB: return "ucb";
      case IndexRule::MOSS: return "moss";
      case IndexRule::SubUCB: return "subucb(" + std::to_string(subsample_m) + ")";
    }
    return "?";
  }
};

/// Final empirical means of completed episodes, used by Init2/Init3.
struct EpisodeHistory {
  std::vector<double> prev_empirical_means;

  bool empty() const { return prev_empirical_means.empty(); }

  /// Non-finite entries (arms never observed) are skipped.
  void append(std::span<const double> means) {
    for (double m : means) {
      if (std::isfinite(m)) prev_empirical_means.push_back(m);
    }
  }

  double mean() const {
    detail::require(!empty(), "history mean of an empty history");
    const double sum =
        std::accumulate(prev_empirical_means.begin(), prev_empirical_means.end(), 0.0);
    return sum / static_cast<double>(prev_empirical_means.size());
  }

  double median() const {
    detail::require(!empty(), "history median of an empty history");
    std::vector<double> v = prev_empirical_means;
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
  }
};

/// mean + gamma * sqrt(2 ln(1/delta) / count); +inf for an unpulled arm.
inline double ucb_index(const ArmStats& stats, double gamma, double delta) {
  detail::require(delta > 0.0 && delta < 1.0, "ucb_index: delta must lie in (0, 1)");
  if (stats.count == 0) return kInfinity;
  const double n = static_cast<double>(stats.count);
  return stats.mean() + gamma * std::sqrt(2.0 * std::log(1.0 / delta) / n);
}

/// mean + gamma * sqrt(max(0, ln(T / (K count))) / count); +inf if unpulled.
inline double moss_index(const ArmStats& stats, double gamma, std::int64_t horizon,
                         std::size_t arms) {
  detail::require(arms >= 1 && horizon >= static_cast<std::int64_t>(arms),
                  "moss_index: requires T >= K >= 1");
  if (stats.count == 0) return kInfinity;
  const double n = static_cast<double>(stats.count);
  const double ratio = static_cast<double>(horizon) / (static_cast<double>(arms) * n);
  return stats.mean() + gamma * std::sqrt(std::max(0.0, std::log(ratio)) / n);
}

inline double policy_index(const SubPolicyConfig& config, const ArmStats& stats,
                           std::size_t arms) {
  if (config.rule == IndexRule::MOSS) {
    return moss_index(stats, config.gamma, config.horizon, arms);
  }
  return ucb_index(stats, config.gamma, config.effective_delta());
}

inline std::vector<ArmStats> init_episode(const SubPolicyConfig& config, std::size_t arms,
                                          const EpisodeHistory& history) {
  InitMode mode = config.init;
  if ((mode == InitMode::Init2 || mode == InitMode::Init3) && history.empty()) {
    mode = InitMode::Init0;
  }
  double seed_value = 0.0;
  switch (mode) {
    case InitMode::Init0: return std::vector<ArmStats>(arms);
    case InitMode::Init1: seed_value = 0.0; break;
    case InitMode::Init2: seed_value = history.mean(); break;
    case InitMode::Init3: seed_value = history.median(); break;
  }
  return std::vector<ArmStats>(arms, ArmStats{1, seed_value, true});
}

/// Index of the maximal value among `eligible`, ties broken uniformly at
/// random. Draws from `rng` only when there is more than one maximizer.
inline std::size_t argmax_random_tie(std::span<const double> values,
                                     std::span<const std::size_t> eligible, RngStream& rng) {
  detail::require(!eligible.empty(), "argmax over an empty eligible set");
  double best = -kInfinity;
  std::size_t best_arm = eligible.front();
  std::size_t ties = 0;
  for (std::size_t k : eligible) {
    const double v = values[k];
    if (v > best) {
      best = v;
      best_arm = k;
      ties = 1;
    } else if (v == best) {
      ++ties;
    }
  }
  if (ties <= 1) return best_arm;
  std::uint64_t pick = rng.uniform_below(ties);
  for (std::size_t k : eligible) {
    if (values[k] == best) {
      if (pick == 0) return k;
      --pick;
    }
  }
  return best_arm;
}

inline std::size_t select_arm(const SubPolicyConfig& config, std::span<const ArmStats> stats,
                              std::span<const std::size_t> eligible, RngStream& rng) {
  detail::require(!eligible.empty(), "select_arm: eligible set is empty");
  std::vector<double> index(stats.size(), -kInfinity);
  for (std::size_t k : eligible) index[k] = policy_index(config, stats[k], stats.size());
  return argmax_random_tie(index, eligible, rng);
}

/// Uniform m-subset of {0..K-1} without replacement, in ascending order.
inline std::vector<std::size_t> subsample_arms(std::size_t arms, std::size_t m, RngStream& rng) {
  detail::require(m >= 1 && m <= arms, "subsample_arms: requires 1 <= m <= K");
  std::vector<std::size_t> pool(arms);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < m; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_below(arms - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

/// Virtual seeds stay in the statistics as one observation.
inline ArmStats update_stats(ArmStats stats, double reward) {
  ++stats.count;
  stats.reward_sum += reward;
  return stats;
}

}  // namespace banditlab
