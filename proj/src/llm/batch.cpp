#include "hforge/llm/batch.hpp"

#include <atomic>
#include <thread>

#include "hforge/core/errors.hpp"

namespace hforge::llm {

namespace {

SampleResult draw_one(Sampler& sampler, const Prompt& prompt, const std::function<bool()>& should_stop) {
  SampleResult r;
  if (should_stop && should_stop()) {
    r.skipped = true;
    r.error = "skipped: run stopped";
    return r;
  }
  try {
    r.text = sampler.draw_sample(prompt);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

std::vector<SampleResult> draw_batch(Sampler& sampler, std::span<const Prompt> prompts,
                                     std::size_t parallelism, const std::function<bool()>& should_stop) {
  if (parallelism == 0) throw ContractViolation("parallelism must be >= 1");
  std::vector<SampleResult> results(prompts.size());
  const auto workers = std::min(parallelism, prompts.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < prompts.size(); ++i) results[i] = draw_one(sampler, prompts[i], should_stop);
    return results;
  }
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (auto i = next.fetch_add(1); i < prompts.size(); i = next.fetch_add(1)) {
          results[i] = draw_one(sampler, prompts[i], should_stop);
        }
      });
    }
  }
  return results;
}

}  // namespace hforge::llm
