#include "hforge/core/events.hpp"

#include <array>
#include <chrono>

#include "hforge/core/errors.hpp"

namespace hforge {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 6> kKindNames{{
    {EventKind::SampleDrawn, "SampleDrawn"},
    {EventKind::EvalFinished, "EvalFinished"},
    {EventKind::NewBest, "NewBest"},
    {EventKind::GenerationEnd, "GenerationEnd"},
    {EventKind::RunEnd, "RunEnd"},
    {EventKind::Error, "Error"},
}};

void zero_wall_times(nlohmann::json& j) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "wall_time_s") {
        it.value() = 0.0;
      } else {
        zero_wall_times(it.value());
      }
    }
  } else if (j.is_array()) {
    for (auto& item : j) zero_wall_times(item);
  }
}

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "Error";
}

EventKind event_kind_from_string(std::string_view text) {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) return k;
  }
  throw ParseError("unknown event kind: " + std::string(text));
}

nlohmann::json to_json(const RunEvent& event) {
  return {{"seq", event.seq},
          {"ts", event.timestamp},
          {"kind", std::string(to_string(event.kind))},
          {"payload", event.payload}};
}

RunEvent event_from_json(const nlohmann::json& j) {
  RunEvent e;
  e.seq = j.at("seq").get<std::uint64_t>();
  e.timestamp = j.at("ts").get<double>();
  e.kind = event_kind_from_string(j.at("kind").get<std::string>());
  e.payload = j.at("payload");
  return e;
}

nlohmann::json canonicalize(nlohmann::json event_json) {
  if (event_json.contains("ts")) event_json["ts"] = 0.0;
  if (event_json.contains("payload")) zero_wall_times(event_json["payload"]);
  return event_json;
}

std::string to_line(const RunEvent& event, bool canonical) {
  auto j = to_json(event);
  if (canonical) j = canonicalize(std::move(j));
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

double now_seconds() {
  using namespace std::chrono;
  return duration<double>(system_clock::now().time_since_epoch()).count();
}

}  // namespace hforge
