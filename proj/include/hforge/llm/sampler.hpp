#pragma once

#include <atomic>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hforge::llm {

struct Prompt {
  std::string system;
  std::string user;
  /// Method name, operator tag, parent candidate ids; copied into the run log.
  nlohmann::json metadata = nlohmann::json::object();
};

nlohmann::json to_json(const Prompt& prompt);

/// Produces raw model text for a prompt. Implementations must be safe to call
/// from several threads at once. Failures throw hforge::SampleError.
class Sampler {
 public:
  virtual ~Sampler() = default;
  virtual std::string draw_sample(const Prompt& prompt) = 0;
};

/// Returns scripted responses in order, cycling when exhausted. The cursor is
/// atomic so concurrent draws never hand out the same slot twice.
class MockSampler final : public Sampler {
 public:
  explicit MockSampler(std::vector<std::string> script);

  std::string draw_sample(const Prompt& prompt) override;

  std::size_t calls() const noexcept { return cursor_.load(); }

 private:
  std::vector<std::string> script_;
  std::atomic<std::size_t> cursor_{0};
};

}  // namespace hforge::llm
