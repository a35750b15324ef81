#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "hforge/core/events.hpp"
#include "hforge/service/run_config.hpp"

namespace hforge::service {

enum class RunState { Pending, Running, Stopped, Finished, Failed };

std::string_view to_string(RunState state);
bool is_terminal(RunState state);

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The concurrent-run cap is reached.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Read-consistent view of one run.
struct RunSnapshot {
  std::string run_id;
  RunState state = RunState::Pending;
  std::int64_t samples_used = 0;
  std::int64_t max_samples = 0;
  nlohmann::json best;  // {candidate_id, sample_index, fitness, code, idea} or null
  std::string log_dir;
  std::string reason;   // RunEnd reason once terminal
  std::string message;  // failure detail
};

nlohmann::json to_json(const RunSnapshot& snapshot);

/// Hosts concurrent runs, each on its own thread with its own coordinator and
/// profiler. Logs go to <config.log_dir>/<run_id>. All queries return
/// snapshots and never wait on a sampler or an evaluation.
class RunManager {
 public:
  explicit RunManager(std::size_t max_active = 4);
  /// Requests a stop for every active run and joins the threads.
  ~RunManager();
  RunManager(const RunManager&) = delete;
  RunManager& operator=(const RunManager&) = delete;

  /// Validates, assigns a run id when the config has none, and starts the run.
  /// Throws ConfigError, CapacityError, or ConfigError("run_id") for a
  /// duplicate id.
  RunSnapshot start(RunConfig config);

  /// Throws NotFoundError for unknown ids.
  RunSnapshot status(const std::string& run_id) const;
  /// Cooperative, idempotent stop. Terminal runs are returned unchanged.
  RunSnapshot stop(const std::string& run_id);
  std::vector<RunEvent> events(const std::string& run_id, std::int64_t since_seq) const;
  std::vector<RunSnapshot> list() const;

  /// Blocks until the run is terminal or `timeout_s` elapses; returns the
  /// latest snapshot.
  RunSnapshot wait(const std::string& run_id, double timeout_s = 3600.0) const;

  std::size_t max_active() const noexcept { return max_active_; }

 private:
  struct Run;
  std::shared_ptr<Run> find(const std::string& run_id) const;

  std::size_t max_active_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Run>> runs_;
  std::uint64_t next_id_ = 1;
};

}  // namespace hforge::service
