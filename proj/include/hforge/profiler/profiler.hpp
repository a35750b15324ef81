#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <vector>

#include <nlohmann/json.hpp>

#include "hforge/core/events.hpp"

namespace hforge::profiler {

/// Run log writer. Keeps every event in memory (for the HTTP event stream)
/// and, when a directory is given, appends events.jsonl with one flush per
/// event, writes config.json at construction and summary.json at RunEnd.
class Profiler final : public EventSink {
 public:
  /// Empty `log_dir` keeps the log in memory only.
  Profiler(std::filesystem::path log_dir, const nlohmann::json& config_snapshot);

  /// Throws ContractViolation for a seq gap or any event after RunEnd, and
  /// std::runtime_error when the log cannot be written.
  void record(const RunEvent& event) override;

  /// Events with seq > since_seq, in order. since_seq = -1 returns everything.
  std::vector<RunEvent> events_since(std::int64_t since_seq) const;
  std::size_t size() const;
  bool finished() const;
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::ofstream out_;
  mutable std::mutex mu_;
  std::vector<RunEvent> events_;
  bool finished_ = false;
};

}  // namespace hforge::profiler
