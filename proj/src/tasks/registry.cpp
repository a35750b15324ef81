#include "hforge/tasks/registry.hpp"

#include "hforge/core/errors.hpp"

namespace hforge::tasks {

const std::vector<std::string>& task_ids() {
  static const std::vector<std::string> ids{std::string(ObpTask::kId), std::string(TspTask::kId),
                                            std::string(SrGrowthTask::kId)};
  return ids;
}

namespace {

[[noreturn]] void unknown_task(std::string_view id) {
  std::string msg = "unknown task '" + std::string(id) + "' (valid:";
  for (const auto& t : task_ids()) msg += " " + t;
  msg += ")";
  throw ConfigError(msg, "task.id");
}

}  // namespace

std::unique_ptr<Task> make_task(std::string_view id, const TaskOptions& options) {
  if (id == ObpTask::kId) return std::make_unique<ObpTask>(options);
  if (id == TspTask::kId) return std::make_unique<TspTask>(options);
  if (id == SrGrowthTask::kId) return std::make_unique<SrGrowthTask>(options);
  unknown_task(id);
}

InstanceSet generate_instances(std::string_view id, std::uint64_t seed, std::int64_t count) {
  if (id == ObpTask::kId) return generate_obp_instances(seed, count);
  if (id == TspTask::kId) return generate_tsp_instances(seed, count);
  if (id == SrGrowthTask::kId) return generate_growth_dataset(seed, count);
  unknown_task(id);
}

}  // namespace hforge::tasks
