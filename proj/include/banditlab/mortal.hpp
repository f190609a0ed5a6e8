#pragma once

// Mortal bandits with a fixed number of live arms: every arm lives for a
// Geometric(1/L) number of rounds and is replaced by a fresh arm the moment it
// dies. Agents: UCB with the arrival-relative log term (fixed gamma), the
// periodic-update UCBs whose gamma is chosen per block by a Greedy meta over a
// gamma grid, and AdaptiveGreedy.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "banditlab/env.hpp"
#include "banditlab/error.hpp"
#include "banditlab/meta.hpp"
#include "banditlab/policies.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

struct MortalArm {
  RewardModel model;
  std::int64_t birth = 1;
  std::int64_t lifetime = 1;
  std::size_t id = 0;  // creation order within the world
  ArmStats stats;

  bool alive_at(std::int64_t t) const { return birth <= t && t < birth + lifetime; }
};

struct MortalScenario {
  PriorSpec prior = PriorSpec::uniform();
  std::size_t arms = 5;
  double expected_lifetime = 1000.0;

  static MortalScenario uniform(std::size_t arms, double lifetime) {
    return {PriorSpec::uniform(), arms, lifetime};
  }
  static MortalScenario beta13(std::size_t arms, double lifetime) {
    return {PriorSpec::beta(1.0, 3.0), arms, lifetime};
  }
};

class MortalWorld {
 public:
  MortalWorld(const MortalScenario& scenario, RngStream& rng)
      : prior_(scenario.prior), expected_lifetime_(scenario.expected_lifetime) {
    detail::require(scenario.arms >= 1, "mortal world needs at least one arm");
    detail::require(scenario.expected_lifetime >= 1.0, "expected lifetime must be >= 1");
    detail::require(!prior_.is_schedule(), "mortal scenarios use a stationary prior");
    arms_.reserve(scenario.arms);
    for (std::size_t k = 0; k < scenario.arms; ++k) arms_.push_back(spawn(rng));
  }

  std::int64_t t() const { return t_; }
  double expected_lifetime() const { return expected_lifetime_; }
  std::span<const MortalArm> arms() const { return arms_; }
  const MortalArm& arm(std::size_t k) const { return arms_[k]; }
  std::size_t size() const { return arms_.size(); }

  std::span<const std::int64_t> dead_lifetimes() const { return dead_lifetimes_; }
  std::span<const std::size_t> dead_ids() const { return dead_ids_; }
  /// Lifetime drawn for every arm ever created, indexed by arm id.
  std::span<const std::int64_t> created_lifetimes() const { return created_lifetimes_; }

  double best_alive_mean() const {
    double best = -kInfinity;
    for (const auto& a : arms_) best = std::max(best, a.model.mean);
    return best;
  }

  /// Records the pull made at the current step, advances time and replaces
  /// every arm that is no longer alive. Returns the number of deaths.
  std::size_t step(std::size_t pulled, double reward, RngStream& rng) {
    detail::require(pulled < arms_.size() && arms_[pulled].alive_at(t_),
                    "world_step: pulled arm is not alive");
    arms_[pulled].stats = update_stats(arms_[pulled].stats, reward);
    ++t_;
    std::size_t deaths = 0;
    for (auto& a : arms_) {
      if (a.alive_at(t_)) continue;
      dead_lifetimes_.push_back(a.lifetime);
      dead_ids_.push_back(a.id);
      a = spawn(rng);
      ++deaths;
    }
    return deaths;
  }

 private:
  MortalArm spawn(RngStream& rng) {
    MortalArm a;
    a.model = RewardModel::bernoulli(sample_prior_mean(prior_, 1, rng));
    a.birth = t_;
    a.lifetime = rng.geometric(1.0 / expected_lifetime_);
    a.id = created_lifetimes_.size();
    created_lifetimes_.push_back(a.lifetime);
    return a;
  }

  PriorSpec prior_;
  double expected_lifetime_;
  std::int64_t t_ = 1;
  std::vector<MortalArm> arms_;
  std::vector<std::int64_t> dead_lifetimes_;
  std::vector<std::size_t> dead_ids_;
  std::vector<std::int64_t> created_lifetimes_;
};

inline std::size_t world_step(MortalWorld& world, std::size_t pulled, double reward,
                              RngStream& rng) {
  return world.step(pulled, reward, rng);
}

/// mean + gamma * sqrt(2 ln(t - birth + 1) / count); +inf if unpulled.
inline double mortal_index(const ArmStats& stats, std::int64_t birth, std::int64_t t,
                           double gamma) {
  detail::require(t >= birth, "mortal_index: t precedes the arm's arrival");
  if (stats.count == 0) return kInfinity;
  const double n = static_cast<double>(stats.count);
  const double age = static_cast<double>(t - birth + 1);
  return stats.mean() + gamma * std::sqrt(2.0 * std::log(age) / n);
}

inline std::optional<double> estimate_L(std::span<const std::int64_t> dead_lifetimes) {
  if (dead_lifetimes.empty()) return std::nullopt;
  double sum = 0.0;
  for (auto l : dead_lifetimes) sum += static_cast<double>(l);
  return sum / static_cast<double>(dead_lifetimes.size());
}

enum class MortalAgentKind { PlainUCB, OracleUCB, PU, EPU, AdaptiveGreedy };

struct MortalAgentConfig {
  MortalAgentKind kind = MortalAgentKind::PU;
  double gamma = 1.0;  // PlainUCB / OracleUCB
  double c = 1.5;      // AdaptiveGreedy
  std::optional<std::int64_t> known_L;  // PU only
  GammaGrid grid = GammaGrid::uniform(32);

  void validate() const {
    if (kind == MortalAgentKind::PU) {
      detail::require(known_L.has_value() && *known_L >= 1, "PU-UCB requires a known lifetime");
    }
    if (kind == MortalAgentKind::EPU) {
      detail::require(!known_L.has_value(), "EPU-UCB must not be given the lifetime");
    }
    if (kind == MortalAgentKind::AdaptiveGreedy) {
      detail::require(c > 0.0, "AdaptiveGreedy needs c > 0");
    }
    if (kind == MortalAgentKind::PlainUCB || kind == MortalAgentKind::OracleUCB) {
      detail::require(gamma >= 0.0, "gamma must be non-negative");
    }
  }

  std::string name() const {
    switch (kind) {
      case MortalAgentKind::PlainUCB: return "ucb";
      case MortalAgentKind::OracleUCB: return "oracle-ucb";
      case MortalAgentKind::PU: return "pu";
      case MortalAgentKind::EPU: return "epu";
      case MortalAgentKind::AdaptiveGreedy: return "ag";
    }
    return "?";
  }
};

/// Decides when a block (the mortal surrogate of an episode) ends.
///
/// PU: at every multiple of the known lifetime. EPU: nothing fires before the
/// first observed death; the first death fires a boundary, and every boundary
/// schedules the next one round(L_hat) steps later.
class BlockClock {
 public:
  explicit BlockClock(const MortalAgentConfig& config) : config_(config) {}

  bool block_boundary(std::int64_t t, std::optional<double> l_hat) {
    detail::require(t >= 1, "block_boundary: t must be >= 1");
    if (config_.kind == MortalAgentKind::PU) return t % *config_.known_L == 0;
    if (config_.kind != MortalAgentKind::EPU) return false;
    if (!l_hat) return false;
    if (next_update_ > 0 && t < next_update_) return false;
    next_update_ = t + std::max<std::int64_t>(1, std::llround(*l_hat));
    return true;
  }

  std::optional<std::int64_t> next_update() const {
    if (next_update_ <= 0) return std::nullopt;
    return next_update_;
  }

 private:
  MortalAgentConfig config_;
  std::int64_t next_update_ = 0;  // 0 until the first boundary
};

/// With probability min(1, c * best_mean) the empirically best arm, otherwise
/// a uniformly random arm. Unpulled arms count as mean 0 here.
inline std::size_t adaptive_greedy_select(std::span<const ArmStats> stats, double c,
                                          RngStream& rng) {
  detail::require(c > 0.0, "adaptive_greedy_select: c must be positive");
  detail::require(!stats.empty(), "adaptive_greedy_select: no arms");
  std::vector<double> means(stats.size());
  std::vector<std::size_t> all(stats.size());
  for (std::size_t k = 0; k < stats.size(); ++k) {
    means[k] = stats[k].count > 0 ? stats[k].mean() : 0.0;
    all[k] = k;
  }
  const double best = *std::max_element(means.begin(), means.end());
  const double p_greedy = std::min(1.0, c * best);
  if (rng.uniform01() < p_greedy) return argmax_random_tie(means, all, rng);
  return static_cast<std::size_t>(rng.uniform_below(stats.size()));
}

struct MortalRun {
  std::vector<double> cumulative_regret;  // at the requested positions
  double final_regret = 0.0;
  std::size_t blocks = 0;  // completed meta updates (PU/EPU)
};

/// Simulates T steps of one agent in a fresh world. Regret accrues the best
/// alive mean minus the pulled arm's mean at every step. `record_at` lists
/// ascending steps (1-based) at which the cumulative regret is recorded;
/// empty means every step.
inline MortalRun run_mortal(const MortalAgentConfig& config, const MortalScenario& scenario,
                            std::int64_t horizon, RngStream& rng,
                            std::span<const std::int64_t> record_at = {}) {
  config.validate();
  detail::require(horizon >= 1, "run_mortal: horizon must be positive");

  RngStream world_rng = rng.derive(0);
  RngStream reward_rng = rng.derive(1);
  RngStream policy_rng = rng.derive(2);
  RngStream meta_rng = rng.derive(3);

  MortalWorld world(scenario, world_rng);
  const std::size_t arms = world.size();
  std::vector<std::size_t> all(arms);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<double> index(arms);
  std::vector<ArmStats> stats(arms);

  const bool periodic =
      config.kind == MortalAgentKind::PU || config.kind == MortalAgentKind::EPU;
  MetaConfig meta_config;
  meta_config.kind = MetaKind::Greedy;
  MetaLearner meta(meta_config, config.grid);
  BlockClock clock(config);
  std::int64_t block = 1;
  bool meta_started = config.kind == MortalAgentKind::PU;
  std::size_t chosen = 0;
  double gamma = config.gamma;
  if (config.kind == MortalAgentKind::PU) {
    chosen = meta.select(block, meta_rng);
    gamma = config.grid[chosen];
  } else if (config.kind == MortalAgentKind::EPU) {
    gamma = config.grid[config.grid.nearest(0.5)];
  }
  double block_reward = 0.0;
  std::int64_t block_steps = 0;

  MortalRun run;
  if (record_at.empty()) {
    run.cumulative_regret.reserve(static_cast<std::size_t>(horizon));
  } else {
    run.cumulative_regret.reserve(record_at.size());
  }
  std::size_t next_record = 0;
  double regret = 0.0;

  for (std::int64_t step = 1; step <= horizon; ++step) {
    const std::int64_t now = world.t();
    std::size_t arm = 0;
    if (config.kind == MortalAgentKind::AdaptiveGreedy) {
      for (std::size_t k = 0; k < arms; ++k) stats[k] = world.arm(k).stats;
      arm = adaptive_greedy_select(stats, config.c, policy_rng);
    } else {
      for (std::size_t k = 0; k < arms; ++k) {
        const MortalArm& a = world.arm(k);
        index[k] = mortal_index(a.stats, a.birth, now, gamma);
      }
      arm = argmax_random_tie(index, all, policy_rng);
    }
    const double mean = world.arm(arm).model.mean;
    regret += world.best_alive_mean() - mean;
    const double reward = sample_reward(world.arm(arm).model, reward_rng);
    world.step(arm, reward, world_rng);
    block_reward += reward;
    ++block_steps;

    if (record_at.empty()) {
      run.cumulative_regret.push_back(regret);
    } else if (next_record < record_at.size() && record_at[next_record] == step) {
      run.cumulative_regret.push_back(regret);
      ++next_record;
    }

    if (periodic && clock.block_boundary(step, estimate_L(world.dead_lifetimes()))) {
      if (meta_started) {
        meta.update(chosen, block_reward / static_cast<double>(block_steps), block, meta_rng);
        ++run.blocks;
        ++block;
      }
      meta_started = true;
      chosen = meta.select(block, meta_rng);
      gamma = config.grid[chosen];
      block_reward = 0.0;
      block_steps = 0;
    }
  }
  run.final_regret = regret;
  return run;
}

}  // namespace banditlab
