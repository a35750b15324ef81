#include "hforge/codekit/eval_control.hpp"

#include "hforge/core/errors.hpp"

namespace hforge::codekit {

void EvalControl::begin_instance() {
  visits_ = 0;
  check_deadline();
}

void EvalControl::check_deadline() const {
  if (Clock::now() > deadline_) throw TimeoutError("evaluation exceeded its time limit");
}

void EvalControl::budget_exhausted() const {
  throw TimeoutError("evaluation exceeded the node budget of " + std::to_string(node_budget_) +
                     " visits per instance");
}

}  // namespace hforge::codekit
