#pragma once

#include <string>
#include <string_view>

#include "hforge/core/fitness.hpp"

namespace hforge {

enum class EvalStatus { Valid, Timeout, RuntimeError, ParseError, SampleError };

std::string_view to_string(EvalStatus status);
EvalStatus eval_status_from_string(std::string_view text);

/// Result of evaluating one candidate. `fitness` is present iff status is Valid.
struct EvalOutcome {
  EvalStatus status = EvalStatus::RuntimeError;
  MaybeFitness fitness;
  double wall_time_s = 0.0;
  std::string diagnostics;

  bool valid() const noexcept { return status == EvalStatus::Valid; }

  static EvalOutcome ok(FitnessVector fitness, double wall_time_s);
  static EvalOutcome failure(EvalStatus status, std::string diagnostics, double wall_time_s);
};

}  // namespace hforge
