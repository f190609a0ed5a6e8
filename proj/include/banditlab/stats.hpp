#pragma once

// Monte Carlo reduction of per-replication curves.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "banditlab/error.hpp"

namespace banditlab {

struct CurvePoint {
  std::int64_t x = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

struct Replication {
  std::uint64_t stream_id = 0;
  std::vector<double> values;
};

struct MeanStderr {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Sample mean and sample-sd / sqrt(n), summed in the given order.
inline MeanStderr mean_stderr(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  detail::require(n >= 1, "mean_stderr: no samples");
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(n);
  if (n < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return {mean, sd / std::sqrt(static_cast<double>(n))};
}

/// sqrt(a^2 + b^2), the stderr of a difference of independent estimates.
inline double joint_stderr(double a, double b) { return std::sqrt(a * a + b * b); }

/// Up to `max_points` positions from {1..n}, always keeping 1 and n.
inline std::vector<std::int64_t> curve_positions(std::int64_t n, std::size_t max_points = 500) {
  detail::require(n >= 1 && max_points >= 2, "curve_positions: invalid arguments");
  std::vector<std::int64_t> xs;
  if (static_cast<std::size_t>(n) <= max_points) {
    xs.reserve(static_cast<std::size_t>(n));
    for (std::int64_t x = 1; x <= n; ++x) xs.push_back(x);
    return xs;
  }
  xs.reserve(max_points);
  const double step = static_cast<double>(n - 1) / static_cast<double>(max_points - 1);
  for (std::size_t i = 0; i < max_points; ++i) {
    const auto x = 1 + static_cast<std::int64_t>(std::llround(step * static_cast<double>(i)));
    if (xs.empty() || x != xs.back()) xs.push_back(x);
  }
  xs.back() = n;
  return xs;
}

/// Pointwise mean and stderr over replications. Replications are reduced in
/// ascending stream_id order, so the result does not depend on the order in
/// which workers finished.
inline std::vector<CurvePoint> aggregate(std::vector<Replication> reps,
                                         const std::vector<std::int64_t>& xs) {
  detail::require(reps.size() >= 2, "aggregate: needs at least two replications");
  std::sort(reps.begin(), reps.end(),
            [](const Replication& a, const Replication& b) { return a.stream_id < b.stream_id; });
  for (const auto& r : reps) {
    detail::require(r.values.size() == xs.size(), "aggregate: curve length mismatch");
  }
  std::vector<CurvePoint> out(xs.size());
  std::vector<double> column(reps.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t r = 0; r < reps.size(); ++r) column[r] = reps[r].values[i];
    const MeanStderr ms = mean_stderr(column);
    out[i] = {xs[i], ms.mean, ms.std_error, reps.size()};
  }
  return out;
}

}  // namespace banditlab
