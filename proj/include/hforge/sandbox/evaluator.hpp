#pragma once

#include <string_view>

#include "hforge/core/outcome.hpp"
#include "hforge/tasks/task.hpp"

namespace hforge::sandbox {

/// Slack allowed between a timeout and the reported wall time.
inline constexpr double kGraceSeconds = 2.0;
/// Diagnostics longer than this are cut.
inline constexpr std::size_t kMaxDiagnostics = 4096;

/// Task option wins over the budget's timeout.
double effective_timeout(const tasks::Task& task, double budget_timeout_s);

/// Evaluates one candidate against `task`. Never throws for candidate
/// misbehaviour: every failure maps to exactly one non-Valid status. With
/// `with_complexity` the task's complexity objective is appended to the
/// fitness vector. Throws ContractViolation when timeout_s is not positive.
EvalOutcome evaluate(std::string_view code, const tasks::Task& task, double timeout_s,
                     bool with_complexity = false);

}  // namespace hforge::sandbox
