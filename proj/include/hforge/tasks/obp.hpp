#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hforge/tasks/task.hpp"

namespace hforge::tasks {

struct ObpInstance {
  int capacity = 100;
  std::vector<int> item_sizes;
};

/// priority(item_size, remaining_capacity_of_one_open_bin); higher is preferred.
using PriorityFn = std::function<double(double item, double remaining)>;

struct PackingResult {
  std::size_t bins_used = 0;
  std::size_t lower_bound = 0;  // ceil(sum of sizes / capacity)
  double score = 0.0;           // bins_used / lower_bound - 1
};

/// Online packing: each item goes to the feasible open bin with the highest
/// priority (ties to the lowest bin index), or opens a new bin.
PackingResult pack_online(const ObpInstance& instance, const PriorityFn& priority,
                          codekit::EvalControl* control = nullptr);

/// Mean excess-bins ratio over instances. Throws ContractViolation for an empty
/// instance list or an instance without items.
FitnessVector obp_evaluate(const PriorityFn& priority, std::span<const ObpInstance> instances,
                           codekit::EvalControl* control = nullptr);

/// `count` instances of `items` sizes uniform in [1, capacity].
std::vector<ObpInstance> generate_obp_instances(std::uint64_t seed, std::int64_t count,
                                                int capacity = 100, int items = 500);

class ObpTask final : public Task {
 public:
  static constexpr std::string_view kId = "obp";
  explicit ObpTask(const TaskOptions& options = {});

  FitnessVector evaluate(std::string_view code, codekit::EvalControl& control) const override;
  std::span<const ObpInstance> instances() const noexcept { return instances_; }

 protected:
  std::string problem_statement() const override;

 private:
  std::vector<ObpInstance> instances_;
};

}  // namespace hforge::tasks
