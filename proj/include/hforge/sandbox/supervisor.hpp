#pragma once

#include <optional>
#include <span>
#include <string>

#include "hforge/sandbox/protocol.hpp"

namespace hforge::sandbox {

inline constexpr std::size_t kStderrCapBytes = 64 * 1024;

enum class SupervisorKind { Ok, Timeout, Crashed, Malformed, SpawnFailed };

struct SupervisorResult {
  SupervisorKind kind = SupervisorKind::SpawnFailed;
  std::optional<WorkerResponse> response;  // set when kind is Ok
  std::string stderr_text;                 // at most kStderrCapBytes
  int exit_code = -1;                      // -1 unless the worker exited normally
  int term_signal = 0;
  double wall_time_s = 0.0;
  std::string detail;  // why the run was not Ok
};

/// Runs `argv` in its own process group, writes the request line, and reads
/// one response line. At the deadline the whole group is SIGKILLed. The group
/// is always killed and the worker reaped before returning, so no process
/// outlives the call.
SupervisorResult supervise(std::span<const std::string> argv, const WorkerRequest& request,
                           double deadline_s);

}  // namespace hforge::sandbox
