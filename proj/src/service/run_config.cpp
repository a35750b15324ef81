#include "hforge/service/run_config.hpp"

#include <fstream>
#include <sstream>

#include "hforge/core/errors.hpp"
#include "hforge/service/toml_lite.hpp"
#include "hforge/tasks/registry.hpp"

namespace hforge::service {

namespace {

using Json = nlohmann::json;

// Typed access with field-named errors.
template <typename T>
T field_value(const Json& section, const std::string& section_name, const std::string& key) {
  try {
    return section.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("wrong type for '" + key + "'", section_name + "." + key);
  }
}

const Json& section_of(const Json& root, const std::string& name) {
  static const Json empty = Json::object();
  const auto it = root.find(name);
  if (it == root.end()) return empty;
  if (!it->is_object()) throw ConfigError("'" + name + "' must be a table", name);
  return *it;
}

void reject_unknown(const Json& section, const std::string& name, std::initializer_list<std::string_view> keys) {
  for (const auto& [key, _] : section.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("unknown key '" + key + "'", name + "." + key);
    }
  }
}

std::vector<std::string> read_script_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read script file " + path.string(), "llm.script_file");
  try {
    return Json::parse(in).get<std::vector<std::string>>();
  } catch (const Json::exception& e) {
    throw ConfigError("script file must be a JSON array of strings: " + std::string(e.what()), "llm.script_file");
  }
}

LlmSettings llm_from_json(const Json& s, const std::filesystem::path& base_dir) {
  reject_unknown(s, "llm", {"kind", "script", "script_file", "host", "model", "api_key", "api_key_env",
                            "request_timeout_s", "max_retries", "temperature", "retry_backoff_s"});
  LlmSettings l;
  if (s.contains("kind")) l.kind = field_value<std::string>(s, "llm", "kind");
  if (l.kind == "mock") {
    if (s.contains("script")) l.script = field_value<std::vector<std::string>>(s, "llm", "script");
    if (s.contains("script_file")) {
      l.script_file = field_value<std::string>(s, "llm", "script_file");
      std::filesystem::path p(l.script_file);
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      auto more = read_script_file(p);
      l.script.insert(l.script.end(), more.begin(), more.end());
    }
    if (l.script.empty()) throw ConfigError("mock sampler needs a non-empty script or script_file", "llm.script");
  } else if (l.kind == "http") {
    auto& h = l.http;
    if (s.contains("host")) h.host = field_value<std::string>(s, "llm", "host");
    if (s.contains("model")) h.model = field_value<std::string>(s, "llm", "model");
    if (s.contains("api_key")) h.api_key = field_value<std::string>(s, "llm", "api_key");
    if (s.contains("api_key_env")) {
      l.api_key_env = field_value<std::string>(s, "llm", "api_key_env");
      if (h.api_key.empty()) h.api_key = llm::api_key_from_env(l.api_key_env);
    }
    if (s.contains("request_timeout_s")) h.request_timeout_s = field_value<double>(s, "llm", "request_timeout_s");
    if (s.contains("max_retries")) h.max_retries = field_value<int>(s, "llm", "max_retries");
    if (s.contains("temperature")) h.temperature = field_value<double>(s, "llm", "temperature");
    if (s.contains("retry_backoff_s")) h.retry_backoff_s = field_value<double>(s, "llm", "retry_backoff_s");
    if (h.api_key.empty() && !l.api_key_env.empty()) {
      throw ConfigError("environment variable " + l.api_key_env + " is unset or empty", "llm.api_key");
    }
    h.validate();
  } else {
    throw ConfigError("llm kind must be 'mock' or 'http', got '" + l.kind + "'", "llm.kind");
  }
  return l;
}

}  // namespace

RunConfig run_config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("config must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "llm" && key != "method" && key != "task" && key != "budget" && key != "profiler" && key != "run_id") {
      throw ConfigError("unknown section '" + key + "'", key);
    }
  }
  RunConfig c;
  c.llm = llm_from_json(section_of(j, "llm"), base_dir);
  c.method = search::method_config_from_json(section_of(j, "method"));

  const auto& t = section_of(j, "task");
  reject_unknown(t, "task", {"id", "instance_seed", "instance_count", "timeout_s", "worker"});
  if (t.contains("id")) c.task_id = field_value<std::string>(t, "task", "id");
  if (t.contains("instance_seed")) c.task.instance_seed = field_value<std::uint64_t>(t, "task", "instance_seed");
  if (t.contains("instance_count")) c.task.instance_count = field_value<std::int64_t>(t, "task", "instance_count");
  if (t.contains("timeout_s")) c.task.timeout_s = field_value<double>(t, "task", "timeout_s");
  if (t.contains("worker")) c.task.worker_command = field_value<std::vector<std::string>>(t, "task", "worker");

  const auto& b = section_of(j, "budget");
  reject_unknown(b, "budget", {"max_samples", "max_generations", "eval_timeout_s"});
  if (b.contains("max_samples")) c.budget.max_samples = field_value<std::int64_t>(b, "budget", "max_samples");
  if (b.contains("max_generations")) c.budget.max_generations = field_value<std::int64_t>(b, "budget", "max_generations");
  if (b.contains("eval_timeout_s")) c.budget.eval_timeout_s = field_value<double>(b, "budget", "eval_timeout_s");
  c.budget.validate();

  const auto& p = section_of(j, "profiler");
  reject_unknown(p, "profiler", {"log_dir"});
  if (p.contains("log_dir")) c.log_dir = field_value<std::string>(p, "profiler", "log_dir");
  if (j.contains("run_id")) {
    c.run_id = field_value<std::string>(j, "config", "run_id");
    if (c.run_id.empty() || c.run_id.find_first_of("/\\") != std::string::npos || c.run_id.starts_with(".")) {
      throw ConfigError("run_id must be a plain, non-empty name", "run_id");
    }
  }

  make_task(c);  // resolves the id and checks the overrides
  return c;
}

RunConfig load_run_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot read config file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return run_config_from_json(parse_toml(ss.str()), file.parent_path());
}

Json to_json(const RunConfig& c) {
  Json llm_json;
  if (c.llm.kind == "mock") {
    llm_json = {{"kind", "mock"}, {"script", c.llm.script}};
  } else {
    llm_json = llm::to_redacted_json(c.llm.http);
    llm_json["kind"] = "http";
    if (!c.llm.api_key_env.empty()) llm_json["api_key_env"] = c.llm.api_key_env;
  }
  Json task = {{"id", c.task_id}};
  if (c.task.instance_seed) task["instance_seed"] = *c.task.instance_seed;
  if (c.task.instance_count) task["instance_count"] = *c.task.instance_count;
  if (c.task.timeout_s) task["timeout_s"] = *c.task.timeout_s;
  if (!c.task.worker_command.empty()) task["worker"] = c.task.worker_command;
  Json budget = {{"max_samples", c.budget.max_samples}, {"eval_timeout_s", c.budget.eval_timeout_s}};
  if (c.budget.max_generations) budget["max_generations"] = *c.budget.max_generations;
  Json out = {{"llm", llm_json},
              {"method", search::to_json(c.method)},
              {"task", task},
              {"budget", budget},
              {"profiler", {{"log_dir", c.log_dir}}}};
  if (!c.run_id.empty()) out["run_id"] = c.run_id;
  return out;
}

std::unique_ptr<llm::Sampler> make_sampler(const RunConfig& c) {
  if (c.llm.kind == "mock") return std::make_unique<llm::MockSampler>(c.llm.script);
  return std::make_unique<llm::HttpSampler>(c.llm.http);
}

std::unique_ptr<tasks::Task> make_task(const RunConfig& c) { return tasks::make_task(c.task_id, c.task); }

}  // namespace hforge::service
