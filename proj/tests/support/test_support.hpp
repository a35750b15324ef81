#pragma once

#include <atomic>
#include <mutex>
#include <string>
#include <vector>

#include "hforge/core/events.hpp"
#include "hforge/llm/sampler.hpp"

namespace hforge::testing {

class MemorySink final : public EventSink {
 public:
  void record(const RunEvent& e) override {
    std::lock_guard lock(mu_);
    events_.push_back(e);
  }
  std::vector<RunEvent> events() const {
    std::lock_guard lock(mu_);
    return events_;
  }
  std::vector<RunEvent> of(EventKind kind) const {
    std::vector<RunEvent> out;
    for (const auto& e : events()) {
      if (e.kind == kind) out.push_back(e);
    }
    return out;
  }
  std::string canonical() const {
    std::string out;
    for (const auto& e : events()) out += to_line(e, true) + "\n";
    return out;
  }

 private:
  mutable std::mutex mu_;
  std::vector<RunEvent> events_;
};

/// Sampler response wrapping a DSL body for the OBP `priority` template.
inline std::string obp_response(const std::string& expr, const std::string& idea = "scored placement") {
  return "{" + idea + "}\n```python\ndef priority(item, bins):\n    return " + expr + "\n```\n";
}

/// A mixed script: distinct valid priorities plus one extraction failure and
/// one unknown-identifier candidate.
inline std::vector<std::string> obp_script() {
  return {obp_response("-(bins - item)", "best fit"),
          obp_response("bins", "worst fit"),
          obp_response("-bins + 0.5 * item", "weighted residual"),
          "I am not sure what to write here.",
          obp_response("item - bins * 1.1", "scaled residual"),
          obp_response("-(bins - item) ^ 2", "squared residual"),
          obp_response("undefined_name * 2", "broken"),
          obp_response("-abs(bins - item - 5)", "target a gap of five"),
          obp_response("0", "first fit"),
          obp_response("-(bins - item) + 0.01 * item", "best fit with item bonus")};
}

/// Draws from a script and raises the stop flag on draw `stop_at` (1-based).
class StoppingSampler final : public llm::Sampler {
 public:
  StoppingSampler(std::vector<std::string> script, std::atomic<bool>& flag, std::size_t stop_at)
      : inner_(std::move(script)), flag_(flag), stop_at_(stop_at) {}
  std::string draw_sample(const llm::Prompt& p) override {
    auto text = inner_.draw_sample(p);
    if (inner_.calls() >= stop_at_) flag_ = true;
    return text;
  }

 private:
  llm::MockSampler inner_;
  std::atomic<bool>& flag_;
  std::size_t stop_at_;
};

}  // namespace hforge::testing
