#include "hforge/llm/sampler.hpp"

#include "hforge/core/errors.hpp"

namespace hforge::llm {

nlohmann::json to_json(const Prompt& prompt) {
  return {{"system", prompt.system}, {"user", prompt.user}, {"metadata", prompt.metadata}};
}

MockSampler::MockSampler(std::vector<std::string> script) : script_(std::move(script)) {
  if (script_.empty()) throw ContractViolation("mock sampler script must not be empty");
}

std::string MockSampler::draw_sample(const Prompt& /*prompt*/) {
  const auto i = cursor_.fetch_add(1);
  return script_[i % script_.size()];
}

}  // namespace hforge::llm
