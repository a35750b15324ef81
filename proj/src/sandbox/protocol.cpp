#include "hforge/sandbox/protocol.hpp"

#include <cmath>

#include "hforge/core/errors.hpp"

namespace hforge::sandbox {

nlohmann::json to_json(const WorkerRequest& r) {
  return {{"task_id", r.task_id},
          {"candidate_code", r.candidate_code},
          {"instance_seed", r.instance_seed},
          {"instance_count", r.instance_count}};
}

WorkerRequest request_from_json(const nlohmann::json& j) {
  WorkerRequest r;
  r.task_id = j.at("task_id").get<std::string>();
  r.candidate_code = j.at("candidate_code").get<std::string>();
  r.instance_seed = j.at("instance_seed").get<std::uint64_t>();
  r.instance_count = j.at("instance_count").get<std::int64_t>();
  return r;
}

nlohmann::json to_json(const WorkerResponse& r) {
  return {{"status", r.status}, {"scores", r.scores}, {"detail", r.detail}};
}

WorkerResponse parse_worker_response(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    throw ParseError("malformed response: not JSON");
  }
  if (!j.is_object() || !j.contains("status") || !j["status"].is_string()) {
    throw ParseError("malformed response: missing status");
  }
  WorkerResponse r;
  r.status = j["status"].get<std::string>();
  if (r.status != "ok" && r.status != "error" && r.status != "parse_error") {
    throw ParseError("malformed response: unknown status '" + r.status + "'");
  }
  if (auto it = j.find("detail"); it != j.end() && it->is_string()) r.detail = it->get<std::string>();
  if (auto it = j.find("scores"); it != j.end()) {
    if (!it->is_array()) throw ParseError("malformed response: scores is not a list");
    for (const auto& v : *it) {
      if (!v.is_number()) throw ParseError("malformed response: non-numeric score");
      r.scores.push_back(v.get<double>());
    }
  }
  if (r.status == "ok") {
    if (r.scores.empty()) throw ParseError("malformed response: ok without scores");
    for (double v : r.scores) {
      if (!std::isfinite(v)) throw ParseError("malformed response: non-finite score");
    }
  }
  return r;
}

}  // namespace hforge::sandbox
