#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hforge/codekit/eval_control.hpp"
#include "hforge/codekit/template_program.hpp"
#include "hforge/core/fitness.hpp"

namespace hforge::tasks {

/// Per-run overrides of a task's defaults.
struct TaskOptions {
  std::optional<std::uint64_t> instance_seed;
  std::optional<std::int64_t> instance_count;
  std::optional<double> timeout_s;
  /// When non-empty, candidates are evaluated by this worker process instead
  /// of in-process (see docs/worker_protocol.md).
  std::vector<std::string> worker_command;
};

struct TaskDefaults {
  std::uint64_t instance_seed = 0;
  std::int64_t instance_count = 1;
  double timeout_s = 50.0;
};

/// An algorithm-design task: a template program plus an evaluator that turns
/// candidate code into a fitness vector (all objectives minimized).
///
/// Tasks are immutable after construction and evaluate() is reentrant.
class Task {
 public:
  virtual ~Task() = default;

  const std::string& id() const noexcept { return id_; }
  const codekit::TemplateProgram& template_program() const noexcept { return template_; }
  int objective_count() const noexcept { return 1; }
  std::uint64_t instance_seed() const noexcept { return seed_; }
  std::int64_t instance_count() const noexcept { return count_; }
  std::optional<double> timeout_override() const noexcept { return timeout_; }
  double default_timeout_s() const noexcept { return default_timeout_; }
  const std::vector<std::string>& worker_command() const noexcept { return worker_; }
  bool uses_worker() const noexcept { return !worker_.empty(); }

  /// Problem statement shown to the sampler, including the rules the
  /// candidate must follow for this evaluation path.
  std::string description() const;

  /// In-process evaluation of a DSL candidate. Throws ParseError for code
  /// that does not compile, TimeoutError when `control` trips.
  virtual FitnessVector evaluate(std::string_view code, codekit::EvalControl& control) const = 0;

  /// Second objective for multi-objective runs: AST node count for DSL
  /// candidates, normalized token count otherwise.
  double complexity(std::string_view code) const;

 protected:
  Task(std::string id, std::string_view template_source, const TaskDefaults& defaults,
       const TaskOptions& options);

  virtual std::string problem_statement() const = 0;

 private:
  std::string id_;
  codekit::TemplateProgram template_;
  std::uint64_t seed_;
  std::int64_t count_;
  std::optional<double> timeout_;
  double default_timeout_;
  std::vector<std::string> worker_;
};

/// Text appended to task descriptions for in-process (DSL) evaluation.
std::string_view dsl_rules();

}  // namespace hforge::tasks
