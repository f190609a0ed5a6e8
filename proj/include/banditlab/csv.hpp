#pragma once

// CSV output. Reals use printf's %.6g (six significant digits, '.' decimal
// point under the C locale); lines end with '\n'.

#include <cstdio>
#include <ostream>
#include <span>
#include <string>

#include "banditlab/experiment.hpp"
#include "banditlab/stats.hpp"

namespace banditlab {

inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline constexpr const char* kSweepHeader = "gamma,algo,K,T,iters,mean_regret,stderr";
inline constexpr const char* kLifelongHeader = "episode,mean_lifelong_regret,stderr,n";
inline constexpr const char* kMortalHeader = "t,mean_regret,stderr,n,agent";

inline void write_sweep_header(std::ostream& out) { out << kSweepHeader << '\n'; }

inline void write_sweep_rows(std::ostream& out, std::span<const SweepRow> rows,
                             const std::string& algo, std::size_t arms, std::int64_t horizon) {
  for (const auto& row : rows) {
    out << format_real(row.gamma) << ',' << algo << ',' << arms << ',' << horizon << ','
        << row.n << ',' << format_real(row.mean_regret) << ',' << format_real(row.std_error)
        << '\n';
  }
}

inline void write_lifelong_csv(std::ostream& out, std::span<const CurvePoint> curve) {
  out << kLifelongHeader << '\n';
  for (const auto& p : curve) {
    out << p.x << ',' << format_real(p.mean) << ',' << format_real(p.std_error) << ',' << p.n
        << '\n';
  }
}

inline void write_mortal_header(std::ostream& out) { out << kMortalHeader << '\n'; }

inline void write_mortal_rows(std::ostream& out, std::span<const CurvePoint> curve,
                              const std::string& agent) {
  for (const auto& p : curve) {
    out << p.x << ',' << format_real(p.mean) << ',' << format_real(p.std_error) << ',' << p.n
        << ',' << agent << '\n';
  }
}

}  // namespace banditlab
