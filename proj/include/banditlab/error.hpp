#pragma once

#include <atomic>
#include <iostream>
#include <stdexcept>
#include <string>

namespace banditlab {

/// Raised when an operation is called outside its documented preconditions.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for malformed or out-of-range configuration (config file or flags).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw ContractViolation(message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

// One line per distinct warning site per process; simulations may hit the
// same condition millions of times.
inline void warn_once(std::atomic<bool>& flag, const std::string& message) {
  if (!flag.exchange(true, std::memory_order_relaxed)) {
    std::clog << "banditlab: warning: " << message << '\n';
  }
}

}  // namespace detail
}  // namespace banditlab
