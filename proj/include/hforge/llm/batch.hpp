#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hforge/llm/sampler.hpp"

namespace hforge::llm {

/// Outcome of one prompt in a batch: text, or an error message.
struct SampleResult {
  std::optional<std::string> text;
  std::string error;
  /// The prompt was never sent because `should_stop` fired first.
  bool skipped = false;

  bool ok() const noexcept { return text.has_value(); }
};

/// Draws one sample per prompt with at most `parallelism` requests in flight.
/// Results are positionally aligned with `prompts`; a failure only affects its
/// own slot. `should_stop` is polled before each request is started.
/// Throws ContractViolation when parallelism is 0.
std::vector<SampleResult> draw_batch(Sampler& sampler, std::span<const Prompt> prompts,
                                     std::size_t parallelism,
                                     const std::function<bool()>& should_stop = {});

}  // namespace hforge::llm
