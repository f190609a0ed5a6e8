#pragma once

// Reward distributions, priors over arm means and the episode-indexed prior
// schedules used for non-stationary experiments.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "banditlab/error.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

enum class RewardKind { Bernoulli, Gaussian };

struct RewardModel {
  RewardKind kind = RewardKind::Bernoulli;
  double mean = 0.0;
  double sd = 1.0;  // Gaussian only; always 1

  static RewardModel bernoulli(double mean) {
    detail::require(mean >= 0.0 && mean <= 1.0, "Bernoulli mean must lie in [0, 1]");
    return {RewardKind::Bernoulli, mean, 1.0};
  }
  static RewardModel gaussian(double mean) { return {RewardKind::Gaussian, mean, 1.0}; }
};

enum class PriorKind { Uniform01, Beta, Constant, AbruptSchedule, SlowSchedule };

/// Distribution of arm means. Schedules vary with the episode index and need
/// the total episode count J.
struct PriorSpec {
  PriorKind kind = PriorKind::Uniform01;
  double a = 1.0;
  double b = 1.0;
  double value = 0.5;  // Constant only
  std::int64_t episodes = 0;

  static PriorSpec uniform() { return {}; }
  static PriorSpec beta(double a, double b) {
    detail::require(a > 0.0 && b > 0.0, "Beta prior parameters must be positive");
    return {PriorKind::Beta, a, b, 0.5, 0};
  }
  /// Point mass; every arm gets the same mean.
  static PriorSpec constant(double v) {
    detail::require(v >= 0.0 && v <= 1.0, "constant prior value must lie in [0, 1]");
    return {PriorKind::Constant, 1.0, 1.0, v, 0};
  }
  static PriorSpec abrupt(std::int64_t J) {
    detail::require(J >= 3, "prior schedules require J >= 3");
    return {PriorKind::AbruptSchedule, 1.0, 1.0, 0.5, J};
  }
  static PriorSpec slow(std::int64_t J) {
    detail::require(J >= 3, "prior schedules require J >= 3");
    return {PriorKind::SlowSchedule, 1.0, 1.0, 0.5, J};
  }

  bool is_schedule() const {
    return kind == PriorKind::AbruptSchedule || kind == PriorKind::SlowSchedule;
  }

  std::string name() const {
    switch (kind) {
      case PriorKind::Uniform01: return "uniform";
      case PriorKind::Beta: return "beta:" + trim_number(a) + "," + trim_number(b);
      case PriorKind::Constant: return "const:" + trim_number(value);
      case PriorKind::AbruptSchedule: return "abrupt";
      case PriorKind::SlowSchedule: return "slow";
    }
    return "?";
  }

 private:
  static std::string trim_number(double x) {
    std::string s = std::to_string(x);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }
};

struct BetaParams {
  double a;
  double b;
  friend bool operator==(const BetaParams&, const BetaParams&) = default;
};

/// Beta parameters of a schedule prior at episode j (1-based).
///
/// Abrupt: Beta(1,3) for j <= floor(J/3) and j >= ceil(2J/3), Beta(3,1) in
/// between. Slow: Beta(2 + cos(2 pi j/J + pi), 2 + cos(2 pi j/J)).
inline BetaParams schedule_params(const PriorSpec& spec, std::int64_t j) {
  detail::require(spec.is_schedule(), "schedule_params: prior is not a schedule");
  const std::int64_t J = spec.episodes;
  detail::require(j >= 1 && j <= J, "schedule_params: episode index out of range");
  if (spec.kind == PriorKind::AbruptSchedule) {
    const std::int64_t first_end = J / 3;
    const std::int64_t third_begin = (2 * J + 2) / 3;
    if (j <= first_end || j >= third_begin) return {1.0, 3.0};
    return {3.0, 1.0};
  }
  const double phase = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(J);
  return {2.0 + std::cos(phase + std::numbers::pi), 2.0 + std::cos(phase)};
}

/// Episodes at which an abrupt schedule switches regime.
inline std::vector<std::int64_t> schedule_change_episodes(const PriorSpec& spec) {
  if (spec.kind != PriorKind::AbruptSchedule) return {};
  const std::int64_t J = spec.episodes;
  return {J / 3 + 1, (2 * J + 2) / 3};
}

inline double sample_prior_mean(const PriorSpec& spec, std::int64_t j, RngStream& rng) {
  switch (spec.kind) {
    case PriorKind::Uniform01: return rng.uniform01();
    case PriorKind::Beta: return rng.beta(spec.a, spec.b);
    case PriorKind::Constant: return spec.value;
    case PriorKind::AbruptSchedule:
    case PriorKind::SlowSchedule: {
      const BetaParams p = schedule_params(spec, j);
      return rng.beta(p.a, p.b);
    }
  }
  return 0.0;
}

struct TaskInstance {
  std::vector<double> means;
  double best_mean = 0.0;
  RewardKind reward = RewardKind::Bernoulli;

  std::size_t arms() const { return means.size(); }

  static TaskInstance from_means(std::vector<double> means,
                                 RewardKind reward = RewardKind::Bernoulli) {
    detail::require(means.size() >= 2, "a task needs at least two arms");
    TaskInstance task;
    task.best_mean = *std::max_element(means.begin(), means.end());
    task.means = std::move(means);
    task.reward = reward;
    return task;
  }
};

inline TaskInstance sample_task(const PriorSpec& spec, std::size_t arms, std::int64_t j,
                                RngStream& rng, RewardKind reward = RewardKind::Bernoulli) {
  detail::require(arms >= 2, "sample_task: K must be at least 2");
  std::vector<double> means(arms);
  for (auto& m : means) m = sample_prior_mean(spec, j, rng);
  return TaskInstance::from_means(std::move(means), reward);
}

inline double sample_reward(RewardKind kind, double mean, RngStream& rng) {
  if (kind == RewardKind::Bernoulli) return rng.bernoulli(mean) ? 1.0 : 0.0;
  return mean + rng.normal();
}

inline double sample_reward(const RewardModel& model, RngStream& rng) {
  if (model.kind == RewardKind::Bernoulli) return rng.bernoulli(model.mean) ? 1.0 : 0.0;
  return model.mean + model.sd * rng.normal();
}

}  // namespace banditlab
