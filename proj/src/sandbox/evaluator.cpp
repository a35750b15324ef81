#include "hforge/sandbox/evaluator.hpp"

#include <chrono>

#include "hforge/codekit/eval_control.hpp"
#include "hforge/core/errors.hpp"
#include "hforge/sandbox/supervisor.hpp"

namespace hforge::sandbox {

namespace {

using Clock = std::chrono::steady_clock;

std::string clip(std::string text) {
  if (text.size() > kMaxDiagnostics) {
    text.resize(kMaxDiagnostics);
    text += "\n[truncated]";
  }
  return text;
}

std::string join(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + "\n" + b;
}

EvalOutcome in_process(std::string_view code, const tasks::Task& task, double timeout_s) {
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
  codekit::EvalControl control(start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(timeout_s)));
  try {
    auto fitness = task.evaluate(code, control);
    return EvalOutcome::ok(std::move(fitness), elapsed());
  } catch (const ParseError& e) {
    return EvalOutcome::failure(EvalStatus::ParseError, clip(e.what()), elapsed());
  } catch (const TimeoutError& e) {
    return EvalOutcome::failure(EvalStatus::Timeout, clip(e.what()), elapsed());
  } catch (const std::exception& e) {
    return EvalOutcome::failure(EvalStatus::RuntimeError, clip(e.what()), elapsed());
  }
}

EvalOutcome external(std::string_view code, const tasks::Task& task, double timeout_s) {
  WorkerRequest req{task.id(), std::string(code), task.instance_seed(), task.instance_count()};
  const auto r = supervise(task.worker_command(), req, timeout_s);
  switch (r.kind) {
    case SupervisorKind::Timeout:
      return EvalOutcome::failure(EvalStatus::Timeout, clip(join(r.detail, r.stderr_text)), r.wall_time_s);
    case SupervisorKind::SpawnFailed:
    case SupervisorKind::Crashed:
    case SupervisorKind::Malformed:
      return EvalOutcome::failure(EvalStatus::RuntimeError, clip(join(r.detail, r.stderr_text)), r.wall_time_s);
    case SupervisorKind::Ok:
      break;
  }
  const auto& resp = *r.response;
  if (resp.status == "parse_error") {
    return EvalOutcome::failure(EvalStatus::ParseError, clip(join(resp.detail, r.stderr_text)), r.wall_time_s);
  }
  if (resp.status == "error") {
    std::string diag = join(resp.detail, r.stderr_text);
    if (diag.empty()) diag = "candidate raised an error";
    return EvalOutcome::failure(EvalStatus::RuntimeError, clip(diag), r.wall_time_s);
  }
  return EvalOutcome::ok(FitnessVector(resp.scores), r.wall_time_s);
}

}  // namespace

double effective_timeout(const tasks::Task& task, double budget_timeout_s) {
  return task.timeout_override().value_or(budget_timeout_s);
}

EvalOutcome evaluate(std::string_view code, const tasks::Task& task, double timeout_s, bool with_complexity) {
  if (!(timeout_s > 0)) throw ContractViolation("timeout must be positive");
  auto outcome = task.uses_worker() ? external(code, task, timeout_s) : in_process(code, task, timeout_s);
  if (outcome.valid() && static_cast<int>(outcome.fitness->size()) != task.objective_count()) {
    return EvalOutcome::failure(EvalStatus::RuntimeError,
                                "expected " + std::to_string(task.objective_count()) + " score(s), got " +
                                    std::to_string(outcome.fitness->size()),
                                outcome.wall_time_s);
  }
  if (outcome.valid() && with_complexity) {
    auto v = outcome.fitness->to_vector();
    v.push_back(task.complexity(code));
    outcome.fitness = FitnessVector(std::move(v));
  }
  return outcome;
}

}  // namespace hforge::sandbox
