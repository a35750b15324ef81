#include "hforge/core/budget.hpp"

#include <algorithm>

#include "hforge/core/errors.hpp"

namespace hforge {

void Budget::validate() const {
  if (max_samples < 1) throw ConfigError("max_samples must be >= 1", "budget.max_samples");
  if (!(eval_timeout_s > 0.0)) throw ConfigError("eval_timeout_s must be > 0", "budget.eval_timeout_s");
  if (max_generations && *max_generations < 1) {
    throw ConfigError("max_generations must be >= 1", "budget.max_generations");
  }
}

std::int64_t budget_remaining(const Budget& budget, std::int64_t samples_used) {
  if (samples_used < 0) throw ContractViolation("samples_used must be >= 0");
  return std::max<std::int64_t>(0, budget.max_samples - samples_used);
}

}  // namespace hforge
