#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "latfricke/rational.hpp"

namespace latfricke {

// Wall-clock cap for one instance.  Reads LATFRICKE_BUDGET_MS when built with
// from_env(); a zero or missing value disables the cap.
class Deadline {
 public:
  Deadline() = default;
  explicit Deadline(std::int64_t ms);
  static Deadline from_env();

  bool enabled() const { return enabled_; }
  bool expired() const;
  // Throws BudgetExceeded(what, estimate) once expired.  Checks the clock every
  // 256 calls.
  void poll(const std::string& what, double estimate = 0);

 private:
  bool enabled_ = false;
  std::chrono::steady_clock::time_point end_{};
  std::uint32_t tick_ = 0;
};

}  // namespace latfricke
