#include "hforge/llm/http_sampler.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "hforge/core/errors.hpp"

namespace hforge::llm {

namespace {

struct ParsedUrl {
  std::string scheme_host_port;
  std::string path;
};

ParsedUrl parse_url(const std::string& host) {
  std::string url = host;
  if (url.find("://") == std::string::npos) url = "https://" + url;
  const auto after_scheme = url.find("://") + 3;
  const auto slash = url.find('/', after_scheme);
  ParsedUrl out;
  out.scheme_host_port = url.substr(0, slash);
  std::string path = slash == std::string::npos ? "" : url.substr(slash);
  while (!path.empty() && path.back() == '/') path.pop_back();
  const std::string suffix = "/chat/completions";
  if (path.size() >= suffix.size() && path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    out.path = path;
  } else if (path.empty()) {
    out.path = "/v1" + suffix;
  } else {
    out.path = path + suffix;
  }
  return out;
}

}  // namespace

void SamplerConfig::validate() const {
  if (host.empty()) throw ConfigError("llm host is required", "llm.host");
  if (model.empty()) throw ConfigError("llm model is required", "llm.model");
  if (api_key.empty()) throw ConfigError("llm api key is required", "llm.api_key");
  if (!(request_timeout_s > 0)) throw ConfigError("request_timeout_s must be > 0", "llm.request_timeout_s");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0", "llm.max_retries");
  if (retry_backoff_s < 0) throw ConfigError("retry_backoff_s must be >= 0", "llm.retry_backoff_s");
}

nlohmann::json to_redacted_json(const SamplerConfig& c) {
  nlohmann::json j{{"host", c.host},
                   {"api_key", c.api_key.empty() ? "" : "***"},
                   {"model", c.model},
                   {"request_timeout_s", c.request_timeout_s},
                   {"max_retries", c.max_retries},
                   {"retry_backoff_s", c.retry_backoff_s}};
  if (c.temperature) j["temperature"] = *c.temperature;
  return j;
}

std::string api_key_from_env(const std::string& name) {
  if (name.empty()) return {};
  const char* v = std::getenv(name.c_str());
  return v ? std::string(v) : std::string();
}

HttpSampler::HttpSampler(SamplerConfig config) : config_(std::move(config)) {
  config_.validate();
  auto url = parse_url(config_.host);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (url.scheme_host_port.rfind("https://", 0) == 0) {
    throw ConfigError("this build has no TLS support; use an http:// host", "llm.host");
  }
#endif
  scheme_host_port_ = std::move(url.scheme_host_port);
  path_ = std::move(url.path);
  if (!config_.temperature) {
    spdlog::info("llm: temperature not set, endpoint default decoding parameters apply");
  }
}

std::string HttpSampler::attempt(const std::string& body) const {
  using Clock = std::chrono::steady_clock;
  httplib::Client client(scheme_host_port_);
  const auto timeout = std::chrono::duration<double>(config_.request_timeout_s);
  const auto as_us = std::chrono::duration_cast<std::chrono::microseconds>(timeout);
  client.set_connection_timeout(as_us);
  client.set_read_timeout(as_us);
  client.set_write_timeout(as_us);
  client.set_keep_alive(false);

  const auto start = Clock::now();
  httplib::Headers headers{{"Authorization", "Bearer " + config_.api_key}};
  auto res = client.Post(path_, headers, body, "application/json");
  const std::chrono::duration<double> elapsed = Clock::now() - start;
  if (!res) throw SampleError("request failed: " + httplib::to_string(res.error()));
  if (elapsed > timeout) throw SampleError("request exceeded timeout of " + std::to_string(config_.request_timeout_s) + " s");
  spdlog::debug("llm: response status {} body {}", res->status, res->body);
  if (res->status < 200 || res->status >= 300) {
    throw SampleError("endpoint returned HTTP " + std::to_string(res->status));
  }
  try {
    auto j = nlohmann::json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw SampleError(std::string("malformed chat-completion response: ") + e.what());
  }
}

std::string HttpSampler::draw_sample(const Prompt& prompt) {
  nlohmann::json messages = nlohmann::json::array();
  if (!prompt.system.empty()) messages.push_back({{"role", "system"}, {"content", prompt.system}});
  messages.push_back({{"role", "user"}, {"content", prompt.user}});
  nlohmann::json request{{"model", config_.model}, {"messages", messages}};
  if (config_.temperature) request["temperature"] = *config_.temperature;
  const auto body = request.dump();
  spdlog::debug("llm: POST {}{} body {}", scheme_host_port_, path_, body);

  std::string last_error;
  for (int attempt_no = 0; attempt_no <= config_.max_retries; ++attempt_no) {
    if (attempt_no > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(config_.retry_backoff_s));
    }
    try {
      return attempt(body);
    } catch (const SampleError& e) {
      last_error = e.what();
      spdlog::debug("llm: attempt {} failed: {}", attempt_no + 1, last_error);
    }
  }
  throw SampleError("sampling failed after " + std::to_string(config_.max_retries + 1) + " attempt(s): " + last_error);
}

}  // namespace hforge::llm
