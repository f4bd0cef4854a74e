#include "latfricke/budget.hpp"

#include <cstdlib>
#include <stdexcept>

namespace latfricke {

Deadline::Deadline(std::int64_t ms) {
  if (ms > 0) {
    enabled_ = true;
    end_ = std::chrono::steady_clock::now() + std::chrono::milliseconds(ms);
  }
}

Deadline Deadline::from_env() {
  const char* s = std::getenv("LATFRICKE_BUDGET_MS");
  if (s == nullptr || *s == '\0') return Deadline();
  char* end = nullptr;
  long long ms = std::strtoll(s, &end, 10);
  if (end == s || *end != '\0' || ms < 0) throw std::invalid_argument("LATFRICKE_BUDGET_MS must be a nonnegative integer");
  return Deadline(ms);
}

bool Deadline::expired() const { return enabled_ && std::chrono::steady_clock::now() >= end_; }

void Deadline::poll(const std::string& what, double estimate) {
  if (!enabled_) return;
  if ((++tick_ & 255u) != 0) return;
  if (expired()) throw BudgetExceeded(what + ": time budget exceeded", estimate);
}

}  // namespace latfricke
