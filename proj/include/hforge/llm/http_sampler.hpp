#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "hforge/llm/sampler.hpp"

namespace hforge::llm {

struct SamplerConfig {
  std::string host;  // base URL, e.g. https://api.example.com/v1
  std::string api_key;
  std::string model;
  double request_timeout_s = 20.0;
  int max_retries = 2;
  std::optional<double> temperature;
  double retry_backoff_s = 1.0;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Config as JSON with the API key replaced by "***".
nlohmann::json to_redacted_json(const SamplerConfig& config);

/// Value of environment variable `name`, or empty.
std::string api_key_from_env(const std::string& name);

/// OpenAI-format chat-completion client.
///
/// Sends `{model, messages[, temperature]}` to `<host>/chat/completions`
/// (`/v1/chat/completions` when the host has no path) and returns the first
/// choice's message content. A request counts as failed on transport error,
/// non-2xx status, malformed body, or when it takes longer than
/// request_timeout_s; failed requests are retried max_retries times with a
/// fixed backoff, then SampleError is thrown.
class HttpSampler final : public Sampler {
 public:
  explicit HttpSampler(SamplerConfig config);

  std::string draw_sample(const Prompt& prompt) override;

  const std::string& endpoint_path() const noexcept { return path_; }

 private:
  std::string attempt(const std::string& body) const;

  SamplerConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

}  // namespace hforge::llm
