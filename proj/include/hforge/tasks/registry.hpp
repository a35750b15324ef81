#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hforge/tasks/obp.hpp"
#include "hforge/tasks/sr.hpp"
#include "hforge/tasks/task.hpp"
#include "hforge/tasks/tsp.hpp"

namespace hforge::tasks {

/// Registered task ids in display order: obp, tsp_construct, sr_growth.
const std::vector<std::string>& task_ids();

/// Throws ConfigError (listing valid ids) for an unknown id.
std::unique_ptr<Task> make_task(std::string_view id, const TaskOptions& options = {});

using InstanceSet = std::variant<std::vector<ObpInstance>, std::vector<TspInstance>, SrDataset>;

/// Deterministic instances for a task. For sr_growth `count` is the row count.
InstanceSet generate_instances(std::string_view id, std::uint64_t seed, std::int64_t count);

}  // namespace hforge::tasks
