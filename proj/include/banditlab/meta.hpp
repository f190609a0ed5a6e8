#pragma once

// Bandit over bandits: a meta-algorithm picks one point of a gamma grid per
// episode and observes the normalized reward of the sub-policy run with it.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "banditlab/env.hpp"
#include "banditlab/episode.hpp"
#include "banditlab/error.hpp"
#include "banditlab/parallel.hpp"
#include "banditlab/policies.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

enum class GridRule { CubeRoot, Sqrt, Explicit };

struct GridSpec {
  GridRule rule = GridRule::CubeRoot;
  std::size_t n = 0;  // Explicit only

  static GridSpec explicit_points(std::size_t n) { return {GridRule::Explicit, n}; }
};

/// CubeRoot: round((J / ln J)^(1/3)), at least 2. Sqrt: round(sqrt(J)).
/// Rounding is half-up.
inline std::size_t grid_size(GridSpec spec, std::int64_t episodes) {
  detail::require(episodes >= 2, "grid_size: requires J >= 2");
  const double J = static_cast<double>(episodes);
  switch (spec.rule) {
    case GridRule::CubeRoot: {
      const double n = std::floor(std::cbrt(J / std::log(J)) + 0.5);
      return std::max<std::size_t>(2, static_cast<std::size_t>(n));
    }
    case GridRule::Sqrt:
      return std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(std::sqrt(J) + 0.5)));
    case GridRule::Explicit:
      detail::require(spec.n >= 2, "explicit grid needs at least two points");
      return spec.n;
  }
  return 2;
}

struct GammaGrid {
  std::vector<double> points;

  /// n equally spaced points on [0, 1], endpoints exact.
  static GammaGrid uniform(std::size_t n) {
    detail::require(n >= 2, "a gamma grid needs at least two points");
    GammaGrid grid;
    grid.points.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      grid.points[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return grid;
  }

  /// Single-point "grid"; only meaningful for fixed-gamma oracles.
  static GammaGrid single(double gamma) { return GammaGrid{{gamma}}; }

  std::size_t size() const { return points.size(); }
  double operator[](std::size_t i) const { return points[i]; }

  /// Nearest point; the lower index wins an exact tie.
  std::size_t nearest(double gamma) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (std::abs(points[i] - gamma) < std::abs(points[best] - gamma)) best = i;
    }
    return best;
  }
};

struct MetaPointStats {
  std::int64_t plays = 0;
  double reward_sum = 0.0;
  double disc_plays = 0.0;
  double disc_sum = 0.0;
  std::deque<std::pair<std::int64_t, double>> window;  // (episode, reward)
  std::int64_t successes = 0;  // binarized rewards, TS only
  std::int64_t failures = 0;

  double mean() const { return reward_sum / static_cast<double>(plays); }
  double discounted_mean() const { return disc_sum / disc_plays; }

  // Summed front to back so that an untouched window reproduces reward_sum
  // bit for bit.
  double window_sum() const {
    double s = 0.0;
    for (const auto& entry : window) s += entry.second;
    return s;
  }
  double window_mean() const { return window_sum() / static_cast<double>(window.size()); }
};

enum class MetaKind { Greedy, DGreedy, SWGreedy, TS, Oracle, RestartOracle };

inline std::string meta_kind_name(MetaKind kind) {
  switch (kind) {
    case MetaKind::Greedy: return "greedy";
    case MetaKind::DGreedy: return "dgreedy";
    case MetaKind::SWGreedy: return "swgreedy";
    case MetaKind::TS: return "ts";
    case MetaKind::Oracle: return "oracle";
    case MetaKind::RestartOracle: return "restart-oracle";
  }
  return "?";
}

struct MetaConfig {
  MetaKind kind = MetaKind::Greedy;
  double omega = 0.9975;
  std::int64_t tau = 1000;
  GridSpec grid{};
  double forced_init_threshold = 1.0;
  std::optional<double> oracle_gamma;
  std::vector<std::int64_t> restart_episodes;

  void validate() const {
    detail::require(omega > 0.0 && omega <= 1.0, "omega must lie in (0, 1]");
    detail::require(tau >= 1, "tau must be at least 1");
  }
};

namespace detail {

inline std::size_t meta_argmax(std::span<const double> values, RngStream& rng) {
  std::vector<std::size_t> all(values.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return argmax_random_tie(values, all, rng);
}

inline std::optional<std::size_t> first_where(std::span<const MetaPointStats> stats,
                                              auto&& predicate) {
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (predicate(stats[i])) return i;
  }
  return std::nullopt;
}

inline std::atomic<bool> meta_clamp_warned{false};

}  // namespace detail

/// Grid point to play at episode j.
///
/// The Greedy family first plays every point once in ascending order (DGreedy:
/// every point whose discounted play count is below the threshold; SWGreedy:
/// every point absent from the window), then plays the argmax of its mean
/// estimate with random tie-breaking. RestartOracle selects like Greedy; its
/// stats are reset by MetaLearner.
inline std::size_t meta_select(const MetaConfig& config, std::span<const MetaPointStats> stats,
                               const GammaGrid& grid, std::int64_t j, RngStream& rng) {
  (void)j;
  detail::require(stats.size() == grid.size(), "meta_select: stats/grid size mismatch");
  std::vector<double> value(stats.size());
  switch (config.kind) {
    case MetaKind::Greedy:
    case MetaKind::RestartOracle: {
      if (auto i = detail::first_where(stats, [](const auto& s) { return s.plays == 0; })) {
        return *i;
      }
      for (std::size_t i = 0; i < stats.size(); ++i) value[i] = stats[i].mean();
      return detail::meta_argmax(value, rng);
    }
    case MetaKind::DGreedy: {
      const double threshold = config.forced_init_threshold;
      if (auto i = detail::first_where(
              stats, [threshold](const auto& s) { return s.disc_plays < threshold; })) {
        return *i;
      }
      for (std::size_t i = 0; i < stats.size(); ++i) value[i] = stats[i].discounted_mean();
      return detail::meta_argmax(value, rng);
    }
    case MetaKind::SWGreedy: {
      if (auto i = detail::first_where(stats, [](const auto& s) { return s.window.empty(); })) {
        return *i;
      }
      for (std::size_t i = 0; i < stats.size(); ++i) value[i] = stats[i].window_mean();
      return detail::meta_argmax(value, rng);
    }
    case MetaKind::TS: {
      for (std::size_t i = 0; i < stats.size(); ++i) {
        value[i] = rng.beta(1.0 + static_cast<double>(stats[i].successes),
                            1.0 + static_cast<double>(stats[i].failures));
      }
      return detail::meta_argmax(value, rng);
    }
    case MetaKind::Oracle:
      detail::require(config.oracle_gamma.has_value(), "oracle meta needs oracle_gamma");
      return grid.nearest(*config.oracle_gamma);
  }
  return 0;
}

/// Records the reward of episode j for the chosen point. Every statistic is
/// maintained regardless of kind: the discounted sums decay for all points
/// once per episode, and window entries from episodes <= j - tau are evicted
/// from all points. Only TS consumes randomness (Bernoulli binarization).
/// Returns the reward actually recorded (clamped to [0, 1]).
inline double meta_update(const MetaConfig& config, std::span<MetaPointStats> stats,
                          std::size_t chosen, double episode_reward, std::int64_t j,
                          RngStream& rng) {
  detail::require(chosen < stats.size(), "meta_update: chosen point out of range");
  double reward = episode_reward;
  if (!(reward >= 0.0 && reward <= 1.0)) {
    reward = std::isnan(reward) ? 0.0 : std::clamp(reward, 0.0, 1.0);
    detail::warn_once(detail::meta_clamp_warned,
                      "meta reward outside [0, 1] clamped (further occurrences not reported)");
  }

  for (auto& s : stats) {
    s.disc_plays *= config.omega;
    s.disc_sum *= config.omega;
  }
  MetaPointStats& point = stats[chosen];
  point.plays += 1;
  point.reward_sum += reward;
  point.disc_plays += 1.0;
  point.disc_sum += reward;
  point.window.emplace_back(j, reward);
  for (auto& s : stats) {
    while (!s.window.empty() && s.window.front().first <= j - config.tau) s.window.pop_front();
  }
  if (config.kind == MetaKind::TS) {
    if (rng.bernoulli(reward)) {
      ++point.successes;
    } else {
      ++point.failures;
    }
  }
  return reward;
}

/// Grid plus per-point statistics for one replication.
class MetaLearner {
 public:
  MetaLearner(MetaConfig config, GammaGrid grid)
      : config_(std::move(config)), grid_(std::move(grid)), stats_(grid_.size()) {
    config_.validate();
  }

  std::size_t select(std::int64_t j, RngStream& rng) {
    if (config_.kind == MetaKind::RestartOracle &&
        std::find(config_.restart_episodes.begin(), config_.restart_episodes.end(), j) !=
            config_.restart_episodes.end()) {
      reset();
    }
    return meta_select(config_, stats_, grid_, j, rng);
  }

  double update(std::size_t chosen, double episode_reward, std::int64_t j, RngStream& rng) {
    return meta_update(config_, stats_, chosen, episode_reward, j, rng);
  }

  void reset() { stats_.assign(grid_.size(), MetaPointStats{}); }

  const MetaConfig& config() const { return config_; }
  const GammaGrid& grid() const { return grid_; }
  std::span<const MetaPointStats> stats() const { return stats_; }

 private:
  MetaConfig config_;
  GammaGrid grid_;
  std::vector<MetaPointStats> stats_;
};

/// One lifelong task family: how tasks are drawn and which sub-policy runs.
struct EpisodeSetting {
  PriorSpec prior = PriorSpec::uniform();
  RewardKind reward = RewardKind::Bernoulli;
  std::size_t arms = 5;
  std::int64_t horizon = 1000;
  std::int64_t episodes = 1;
  SubPolicyConfig sub{};
};

/// Brute-force search for the best fixed gamma: every grid point is run on
/// the same `replications` tasks (replication i draws its task at episode
/// 1 + i mod J, so schedules are covered) and the point with the lowest mean
/// pseudo-regret wins, lowest gamma on ties.
inline double oracle_gamma(const EpisodeSetting& setting, const GammaGrid& grid,
                           std::size_t replications, const RngStream& rng,
                           std::size_t workers = 1) {
  detail::require(replications >= 1, "oracle_gamma: requires M >= 1");
  detail::require(grid.size() >= 1, "oracle_gamma: empty grid");
  if (grid.size() == 1) return grid[0];

  const std::size_t points = grid.size();
  std::vector<double> regret(points * replications);
  const EpisodeHistory no_history;
  parallel_for(points * replications, workers, [&](std::size_t item) {
    const std::size_t g = item / replications;
    const std::size_t r = item % replications;
    const RngStream base = rng.derive(r);
    const auto j = 1 + static_cast<std::int64_t>(r % static_cast<std::size_t>(
                                                          std::max<std::int64_t>(setting.episodes, 1)));
    RngStream task_rng = base.derive(0);
    RngStream play_rng = base.derive(1);
    const TaskInstance task = sample_task(setting.prior, setting.arms, j, task_rng, setting.reward);
    SubPolicyConfig sub = setting.sub;
    sub.gamma = grid[g];
    regret[item] = run_episode(sub, task, setting.horizon, no_history, play_rng).pseudo_regret;
  });

  std::size_t best = 0;
  double best_mean = kInfinity;
  for (std::size_t g = 0; g < points; ++g) {
    double sum = 0.0;
    for (std::size_t r = 0; r < replications; ++r) sum += regret[g * replications + r];
    const double mean = sum / static_cast<double>(replications);
    if (mean < best_mean) {
      best_mean = mean;
      best = g;
    }
  }
  return grid[best];
}

}  // namespace banditlab
