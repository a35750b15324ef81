#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hforge/core/budget.hpp"
#include "hforge/llm/http_sampler.hpp"
#include "hforge/search/method_config.hpp"
#include "hforge/tasks/task.hpp"

namespace hforge::service {

/// Sampler section. kind "mock" replays `script` (inline, or a JSON array of
/// strings read from script_file); kind "http" talks to an OpenAI-format
/// endpoint, taking the key from `api_key` or the environment variable named
/// by api_key_env.
struct LlmSettings {
  std::string kind = "mock";
  std::vector<std::string> script;
  std::string script_file;
  llm::SamplerConfig http;
  std::string api_key_env;
};

/// One run, as read from a TOML file or a POST /runs body. Both use the same
/// schema: sections llm, method, task, budget, profiler, and an optional
/// top-level run_id.
struct RunConfig {
  LlmSettings llm;
  search::MethodConfig method;
  std::string task_id = "obp";
  tasks::TaskOptions task;
  Budget budget;
  std::string log_dir = "logs";
  std::string run_id;
};

/// Parses and validates. Relative script_file paths resolve against
/// `base_dir`. Throws ConfigError with the offending field, for example
/// "task.id" or "llm.api_key".
RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

/// Reads a TOML config file and validates it.
RunConfig load_run_config(const std::filesystem::path& file);

/// Snapshot for config.json and the API. The API key is redacted and the mock
/// script is inlined.
nlohmann::json to_json(const RunConfig& config);

std::unique_ptr<llm::Sampler> make_sampler(const RunConfig& config);
std::unique_ptr<tasks::Task> make_task(const RunConfig& config);

}  // namespace hforge::service
