#include "hforge/tasks/task.hpp"

#include "hforge/codekit/dsl_function.hpp"
#include "hforge/codekit/normalize.hpp"
#include "hforge/core/errors.hpp"

namespace hforge::tasks {

std::string_view dsl_rules() {
  return "The function body may contain only assignments (`name = expression`) and a final "
         "`return expression`. Expressions use numbers, the function's parameters, earlier "
         "assigned names, the operators + - * / ** (or ^) and < <= > >=, and the functions "
         "abs, sqrt, log, exp, sin, cos, min, max, pow and if(condition, then, otherwise). "
         "Loops, conditionals statements, imports and helper functions are not available. "
         "Arithmetic is protected: division by a value near zero returns 1, sqrt and log "
         "use the absolute value of their argument.";
}

Task::Task(std::string id, std::string_view template_source, const TaskDefaults& defaults,
           const TaskOptions& options)
    : id_(std::move(id)),
      template_(codekit::parse_template(template_source)),
      seed_(options.instance_seed.value_or(defaults.instance_seed)),
      count_(options.instance_count.value_or(defaults.instance_count)),
      timeout_(options.timeout_s),
      default_timeout_(defaults.timeout_s),
      worker_(options.worker_command) {
  if (count_ < 1) throw ConfigError("instance_count must be >= 1", "task.instance_count");
  if (timeout_ && !(*timeout_ > 0)) throw ConfigError("timeout_s must be > 0", "task.timeout_s");
}

std::string Task::description() const {
  std::string text = problem_statement();
  text += "\n\n";
  if (uses_worker()) {
    text += "Implement the function in Python. The `math` module is available.";
  } else {
    text += dsl_rules();
  }
  return text;
}

double Task::complexity(std::string_view code) const {
  if (!uses_worker()) {
    try {
      auto fn = codekit::compile_function(code, template_.function_name, template_.params.size());
      return static_cast<double>(fn.body.node_count());
    } catch (const ParseError&) {
    }
  }
  return static_cast<double>(codekit::token_count(code));
}

}  // namespace hforge::tasks
