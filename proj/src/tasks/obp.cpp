#include "hforge/tasks/obp.hpp"

#include <numeric>

#include "hforge/codekit/dsl_function.hpp"
#include "hforge/core/errors.hpp"
#include "hforge/core/random.hpp"

namespace hforge::tasks {

namespace {

constexpr std::string_view kTemplate = R"(import math

def priority(item, bins):
    """Scores one open bin for the incoming item. The item is placed into the
    feasible open bin with the highest score; if no open bin can hold it, a new
    bin is opened.

    Args:
        item: size of the incoming item (an integer between 1 and the capacity).
        bins: remaining capacity of the open bin being scored (always >= item).

    Return:
        A real-valued priority; higher means more preferred.
    """
    return -(bins - item)
)";

}  // namespace

PackingResult pack_online(const ObpInstance& instance, const PriorityFn& priority,
                          codekit::EvalControl* control) {
  if (instance.item_sizes.empty()) throw ContractViolation("OBP instance must contain items");
  if (instance.capacity <= 0) throw ContractViolation("OBP capacity must be positive");
  std::vector<int> remaining;
  long long total = 0;
  for (int size : instance.item_sizes) {
    if (size < 1 || size > instance.capacity) throw ContractViolation("item size outside [1, capacity]");
    total += size;
    std::ptrdiff_t best = -1;
    double best_score = 0.0;
    for (std::size_t b = 0; b < remaining.size(); ++b) {
      if (remaining[b] < size) continue;
      const double score = priority(size, remaining[b]);
      if (best < 0 || score > best_score) {
        best = static_cast<std::ptrdiff_t>(b);
        best_score = score;
      }
    }
    if (best < 0) {
      remaining.push_back(instance.capacity - size);
    } else {
      remaining[static_cast<std::size_t>(best)] -= size;
    }
    if (control) control->check_deadline();
  }
  PackingResult r;
  r.bins_used = remaining.size();
  r.lower_bound = static_cast<std::size_t>((total + instance.capacity - 1) / instance.capacity);
  r.score = static_cast<double>(r.bins_used) / static_cast<double>(r.lower_bound) - 1.0;
  return r;
}

FitnessVector obp_evaluate(const PriorityFn& priority, std::span<const ObpInstance> instances,
                           codekit::EvalControl* control) {
  if (instances.empty()) throw ContractViolation("OBP evaluation needs at least one instance");
  double sum = 0.0;
  for (const auto& inst : instances) {
    if (control) control->begin_instance();
    sum += pack_online(inst, priority, control).score;
  }
  return FitnessVector{sum / static_cast<double>(instances.size())};
}

std::vector<ObpInstance> generate_obp_instances(std::uint64_t seed, std::int64_t count, int capacity, int items) {
  if (count < 1) throw ContractViolation("instance count must be >= 1");
  SplitMix64 rng(seed);
  std::vector<ObpInstance> out(static_cast<std::size_t>(count));
  for (auto& inst : out) {
    inst.capacity = capacity;
    inst.item_sizes.reserve(static_cast<std::size_t>(items));
    for (int i = 0; i < items; ++i) inst.item_sizes.push_back(static_cast<int>(rng.uniform_int(1, capacity)));
  }
  return out;
}

ObpTask::ObpTask(const TaskOptions& options)
    : Task(std::string(kId), kTemplate, TaskDefaults{2024, 8, 50.0}, options),
      instances_(generate_obp_instances(instance_seed(), instance_count())) {}

std::string ObpTask::problem_statement() const {
  return "Online bin packing: items arrive one at a time and must be placed immediately into "
         "bins of capacity 100. Design a priority function that scores each open bin for the "
         "incoming item so that as few bins as possible are used in total.";
}

FitnessVector ObpTask::evaluate(std::string_view code, codekit::EvalControl& control) const {
  const auto& tp = template_program();
  const auto fn = codekit::compile_function(code, tp.function_name, tp.params.size());
  auto priority = [&](double item, double remaining) {
    const double args[] = {item, remaining};
    return fn.body.evaluate(args, &control);
  };
  return obp_evaluate(priority, instances_, &control);
}

}  // namespace hforge::tasks
