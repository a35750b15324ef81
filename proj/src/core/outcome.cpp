#include "hforge/core/outcome.hpp"

#include "hforge/core/candidate.hpp"
#include "hforge/core/errors.hpp"

namespace hforge {

std::string_view to_string(EvalStatus status) {
  switch (status) {
    case EvalStatus::Valid: return "valid";
    case EvalStatus::Timeout: return "timeout";
    case EvalStatus::RuntimeError: return "runtime_error";
    case EvalStatus::ParseError: return "parse_error";
    case EvalStatus::SampleError: return "sample_error";
  }
  return "runtime_error";
}

EvalStatus eval_status_from_string(std::string_view text) {
  for (auto s : {EvalStatus::Valid, EvalStatus::Timeout, EvalStatus::RuntimeError,
                 EvalStatus::ParseError, EvalStatus::SampleError}) {
    if (to_string(s) == text) return s;
  }
  throw ParseError("unknown evaluation status: " + std::string(text));
}

EvalOutcome EvalOutcome::ok(FitnessVector fitness, double wall_time_s) {
  return EvalOutcome{EvalStatus::Valid, std::move(fitness), wall_time_s, {}};
}

EvalOutcome EvalOutcome::failure(EvalStatus status, std::string diagnostics, double wall_time_s) {
  if (status == EvalStatus::Valid) throw ContractViolation("failure outcome cannot be Valid");
  return EvalOutcome{status, std::nullopt, wall_time_s, std::move(diagnostics)};
}

bool better_scalar(const Candidate& a, const Candidate& b) {
  auto order = compare_lexicographic(a.fitness(), b.fitness());
  if (order != 0) return order < 0;
  return a.sample_index < b.sample_index;
}

}  // namespace hforge
