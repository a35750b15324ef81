#pragma once

#include <cstdint>
#include <optional>

namespace hforge {

struct Budget {
  std::int64_t max_samples = 2000;
  std::optional<std::int64_t> max_generations;
  double eval_timeout_s = 50.0;

  /// Throws ConfigError when an invariant is broken.
  void validate() const;
};

/// max(0, max_samples - samples_used). Throws ContractViolation when samples_used < 0.
std::int64_t budget_remaining(const Budget& budget, std::int64_t samples_used);

}  // namespace hforge
