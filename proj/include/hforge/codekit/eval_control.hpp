#pragma once

#include <chrono>
#include <cstdint>

namespace hforge::codekit {

/// Cooperative time limit for in-process evaluation. Every AST node visit is
/// charged; the budget resets per instance and the wall-clock deadline is
/// polled every 4096 visits and at instance boundaries.
class EvalControl {
 public:
  using Clock = std::chrono::steady_clock;
  static constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

  EvalControl(Clock::time_point deadline, std::uint64_t node_budget = kDefaultNodeBudget)
      : deadline_(deadline), node_budget_(node_budget) {}

  static EvalControl unlimited() { return EvalControl(Clock::time_point::max(), UINT64_MAX); }

  void begin_instance();
  void check_deadline() const;

  void visit() {
    if (++visits_ > node_budget_) budget_exhausted();
    if ((visits_ & 4095U) == 0) check_deadline();
  }

  std::uint64_t visits() const noexcept { return visits_; }

 private:
  [[noreturn]] void budget_exhausted() const;

  Clock::time_point deadline_;
  std::uint64_t node_budget_;
  std::uint64_t visits_ = 0;
};

}  // namespace hforge::codekit
