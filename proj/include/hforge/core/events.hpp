#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace hforge {

enum class EventKind { SampleDrawn, EvalFinished, NewBest, GenerationEnd, RunEnd, Error };

std::string_view to_string(EventKind kind);
EventKind event_kind_from_string(std::string_view text);

struct RunEvent {
  std::uint64_t seq = 0;
  double timestamp = 0.0;
  EventKind kind = EventKind::Error;
  nlohmann::json payload = nlohmann::json::object();
};

/// One JSON object with fields seq, ts, kind, payload.
nlohmann::json to_json(const RunEvent& event);
RunEvent event_from_json(const nlohmann::json& j);

/// Serialized line without trailing newline. With `canonical`, the timestamp and
/// every `wall_time_s` payload field are zeroed so logs compare byte-for-byte.
std::string to_line(const RunEvent& event, bool canonical = false);

nlohmann::json canonicalize(nlohmann::json event_json);

/// Seconds since the Unix epoch.
double now_seconds();

/// Receives events in sequence order.
class EventSink {
 public:
  virtual ~EventSink() = default;
  virtual void record(const RunEvent& event) = 0;
};

}  // namespace hforge
