#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hforge/core/budget.hpp"
#include "hforge/core/candidate.hpp"
#include "hforge/core/events.hpp"
#include "hforge/core/random.hpp"
#include "hforge/llm/sampler.hpp"
#include "hforge/search/method_config.hpp"
#include "hforge/search/population.hpp"
#include "hforge/search/prompts.hpp"
#include "hforge/tasks/task.hpp"

namespace hforge::search {

struct RunContext {
  const tasks::Task& task;
  llm::Sampler& sampler;
  Budget budget;
  MethodConfig method;
  EventSink* sink = nullptr;
  const std::atomic<bool>* stop = nullptr;
};

struct RunSummary {
  std::string reason;  // budget | stopped | max_generations | error
  std::int64_t samples_used = 0;
  int generations = 0;
  double wall_time_s = 0.0;
  std::optional<Candidate> best;
  std::vector<Candidate> archive;  // best only for scalar methods, Pareto set otherwise
  nlohmann::json method_state = nlohmann::json::object();
};

nlohmann::json candidate_json(const Candidate& c);
nlohmann::json to_json(const RunSummary& summary);

/// Owns candidate ids, the sample counter, the event sequence, best/archive
/// tracking and the run's random stream. Methods drive it from one thread.
class Coordinator {
 public:
  explicit Coordinator(RunContext ctx);

  /// Evaluates the task template without charging the budget.
  Candidate evaluate_seed();

  /// Draws, extracts and evaluates one candidate per prompt. The batch is cut
  /// to the remaining budget. Results align with `prompts`; entries are empty
  /// for prompts that were cut or skipped because of a stop request.
  std::vector<std::optional<Candidate>> sample(std::vector<llm::Prompt> prompts);

  void end_generation(std::size_t population_size);
  bool done() const;
  RunSummary finish(nlohmann::json method_state);

  SplitMix64& rng() noexcept { return rng_; }
  const PromptBuilder& prompts() const noexcept { return prompts_; }
  const MethodConfig& config() const noexcept { return ctx_.method; }
  const tasks::Task& task() const noexcept { return ctx_.task; }
  const Budget& budget() const noexcept { return ctx_.budget; }
  bool multi_objective() const noexcept { return multi_; }
  std::int64_t samples_used() const noexcept { return samples_used_; }
  std::int64_t remaining() const noexcept;
  int generations() const noexcept { return generation_; }
  const Candidate* best() const noexcept { return best_ ? &*best_ : nullptr; }
  const ParetoArchive& archive() const noexcept { return archive_; }

 private:
  void emit(EventKind kind, nlohmann::json payload);
  bool stop_requested() const;
  void track(const Candidate& c);
  std::vector<CandidateId> archive_ids() const;

  RunContext ctx_;
  PromptBuilder prompts_;
  bool multi_;
  double timeout_s_;
  SplitMix64 rng_;
  std::uint64_t seq_ = 0;
  CandidateId next_id_ = 0;
  std::int64_t samples_used_ = 0;
  int generation_ = 0;
  bool stopped_ = false;
  bool error_ = false;
  bool finished_ = false;
  std::optional<Candidate> best_;
  ParetoArchive archive_;
  double start_ = 0.0;
};

/// Runs `ctx.method` to completion. Exactly one RunEnd event is emitted.
RunSummary run(RunContext ctx);

}  // namespace hforge::search
