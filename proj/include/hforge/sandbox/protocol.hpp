#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace hforge::sandbox {

/// One line of JSON sent to a worker's stdin.
struct WorkerRequest {
  std::string task_id;
  std::string candidate_code;
  std::uint64_t instance_seed = 0;
  std::int64_t instance_count = 1;
};

/// One line of JSON read from a worker's stdout.
/// status is "ok", "error" (candidate raised) or "parse_error".
struct WorkerResponse {
  std::string status;
  std::vector<double> scores;
  std::string detail;
};

nlohmann::json to_json(const WorkerRequest& request);
WorkerRequest request_from_json(const nlohmann::json& j);
nlohmann::json to_json(const WorkerResponse& response);

/// Parses and validates a response line: known status, and when status is
/// "ok" a non-empty list of finite scores. Throws ParseError otherwise.
WorkerResponse parse_worker_response(std::string_view line);

}  // namespace hforge::sandbox
