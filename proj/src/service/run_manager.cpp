#include "hforge/service/run_manager.hpp"

#include <chrono>
#include <condition_variable>

#include <spdlog/spdlog.h>

#include "hforge/core/errors.hpp"
#include "hforge/profiler/profiler.hpp"
#include "hforge/search/coordinator.hpp"

namespace hforge::service {

std::string_view to_string(RunState s) {
  switch (s) {
    case RunState::Pending: return "pending";
    case RunState::Running: return "running";
    case RunState::Stopped: return "stopped";
    case RunState::Finished: return "finished";
    case RunState::Failed: return "failed";
  }
  return "failed";
}

bool is_terminal(RunState s) { return s == RunState::Stopped || s == RunState::Finished || s == RunState::Failed; }

nlohmann::json to_json(const RunSnapshot& s) {
  return {{"run_id", s.run_id},
          {"state", std::string(to_string(s.state))},
          {"samples_used", s.samples_used},
          {"max_samples", s.max_samples},
          {"best", s.best},
          {"log_dir", s.log_dir},
          {"reason", s.reason.empty() ? nlohmann::json(nullptr) : nlohmann::json(s.reason)},
          {"message", s.message.empty() ? nlohmann::json(nullptr) : nlohmann::json(s.message)}};
}

namespace {

nlohmann::json brief(const nlohmann::json& c) {
  return {{"candidate_id", c["candidate_id"]},
          {"sample_index", c["sample_index"]},
          {"fitness", c["fitness"]},
          {"code", c["code"]},
          {"idea", c["idea"]}};
}

}  // namespace

// A run is also the coordinator's event sink: it forwards to the profiler and
// keeps the snapshot fields current.
struct RunManager::Run final : EventSink {
  RunConfig config;
  std::unique_ptr<tasks::Task> task;
  std::unique_ptr<llm::Sampler> sampler;
  std::unique_ptr<profiler::Profiler> log;
  std::atomic<bool> stop_flag{false};
  std::thread thread;

  mutable std::mutex mu;
  mutable std::condition_variable cv;
  RunSnapshot snap;
  std::map<std::int64_t, nlohmann::json> evaluated;  // candidate id -> EvalFinished payload

  void record(const RunEvent& e) override {
    log->record(e);
    std::lock_guard lock(mu);
    switch (e.kind) {
      case EventKind::SampleDrawn: ++snap.samples_used; break;
      case EventKind::EvalFinished: {
        const auto& p = e.payload;
        if (!p.value("fitness", nlohmann::json()).is_null()) {
          evaluated[p.at("candidate_id").get<std::int64_t>()] = brief(p);
        }
        break;
      }
      case EventKind::NewBest: {
        const auto it = evaluated.find(e.payload.at("candidate_id").get<std::int64_t>());
        if (it != evaluated.end()) {
          // Multi-objective NewBest marks archive entries; keep the scalar-best one.
          const bool better = snap.best.is_null() ||
                              it->second["fitness"][0].get<double>() < snap.best["fitness"][0].get<double>();
          if (better) snap.best = it->second;
        }
        break;
      }
      default: break;
    }
  }

  void set_state(RunState s, std::string reason = {}, std::string message = {}) {
    {
      std::lock_guard lock(mu);
      snap.state = s;
      if (!reason.empty()) snap.reason = std::move(reason);
      if (!message.empty()) snap.message = std::move(message);
    }
    cv.notify_all();
  }

  RunSnapshot snapshot() const {
    std::lock_guard lock(mu);
    return snap;
  }

  void execute() {
    set_state(RunState::Running);
    try {
      const auto summary = search::run({*task, *sampler, config.budget, config.method, this, &stop_flag});
      {
        std::lock_guard lock(mu);
        if (summary.best) snap.best = brief(search::candidate_json(*summary.best));
      }
      if (summary.reason == "stopped") set_state(RunState::Stopped, summary.reason);
      else if (summary.reason == "error") set_state(RunState::Failed, summary.reason, "every sample in a generation failed");
      else set_state(RunState::Finished, summary.reason);
    } catch (const std::exception& e) {
      spdlog::error("run {} failed: {}", config.run_id, e.what());
      set_state(RunState::Failed, "error", e.what());
    }
  }
};

RunManager::RunManager(std::size_t max_active) : max_active_(max_active) {
  if (max_active_ < 1) throw ConfigError("max_active must be >= 1", "max_runs");
}

RunManager::~RunManager() {
  std::vector<std::shared_ptr<Run>> all;
  {
    std::lock_guard lock(mu_);
    for (auto& [_, r] : runs_) all.push_back(r);
  }
  for (auto& r : all) r->stop_flag = true;
  for (auto& r : all) {
    if (r->thread.joinable()) r->thread.join();
  }
}

RunSnapshot RunManager::start(RunConfig config) {
  auto run = std::make_shared<Run>();
  run->task = make_task(config);
  run->sampler = make_sampler(config);
  {
    std::lock_guard lock(mu_);
    std::size_t active = 0;
    for (const auto& [_, r] : runs_) {
      if (!is_terminal(r->snapshot().state)) ++active;
    }
    if (active >= max_active_) {
      throw CapacityError("concurrent run limit of " + std::to_string(max_active_) + " reached");
    }
    if (config.run_id.empty()) {
      do {
        config.run_id = "run-" + std::to_string(next_id_++);
      } while (runs_.contains(config.run_id));
    } else if (runs_.contains(config.run_id)) {
      throw ConfigError("run id '" + config.run_id + "' already exists", "run_id");
    }
    const auto dir = std::filesystem::path(config.log_dir) / config.run_id;
    run->log = std::make_unique<profiler::Profiler>(dir, to_json(config));
    run->snap.run_id = config.run_id;
    run->snap.max_samples = config.budget.max_samples;
    run->snap.log_dir = dir.string();
    run->config = std::move(config);
    runs_[run->config.run_id] = run;
  }
  spdlog::info("run {} started (method {}, task {})", run->config.run_id, search::to_string(run->config.method.method),
               run->config.task_id);
  run->thread = std::thread([run] { run->execute(); });
  return run->snapshot();
}

std::shared_ptr<RunManager::Run> RunManager::find(const std::string& run_id) const {
  std::lock_guard lock(mu_);
  const auto it = runs_.find(run_id);
  if (it == runs_.end()) throw NotFoundError("no run with id '" + run_id + "'");
  return it->second;
}

RunSnapshot RunManager::status(const std::string& run_id) const { return find(run_id)->snapshot(); }

RunSnapshot RunManager::stop(const std::string& run_id) {
  auto run = find(run_id);
  if (!is_terminal(run->snapshot().state)) run->stop_flag = true;
  return run->snapshot();
}

std::vector<RunEvent> RunManager::events(const std::string& run_id, std::int64_t since_seq) const {
  return find(run_id)->log->events_since(since_seq);
}

std::vector<RunSnapshot> RunManager::list() const {
  std::lock_guard lock(mu_);
  std::vector<RunSnapshot> out;
  for (const auto& [_, r] : runs_) out.push_back(r->snapshot());
  return out;
}

RunSnapshot RunManager::wait(const std::string& run_id, double timeout_s) const {
  auto run = find(run_id);
  std::unique_lock lock(run->mu);
  run->cv.wait_for(lock, std::chrono::duration<double>(timeout_s), [&] { return is_terminal(run->snap.state); });
  return run->snap;
}

}  // namespace hforge::service
