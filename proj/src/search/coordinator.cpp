#include "hforge/search/coordinator.hpp"

#include <atomic>
#include <thread>

#include "hforge/codekit/extract.hpp"
#include "hforge/codekit/normalize.hpp"
#include "hforge/core/errors.hpp"
#include "hforge/llm/batch.hpp"
#include "hforge/sandbox/evaluator.hpp"

namespace hforge::search {

namespace {

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

nlohmann::json fitness_json(const MaybeFitness& f) {
  return f ? nlohmann::json(f->to_vector()) : nlohmann::json(nullptr);
}

nlohmann::json ids_json(const std::vector<CandidateId>& ids) { return nlohmann::json(ids); }

}  // namespace

nlohmann::json candidate_json(const Candidate& c) {
  return {{"candidate_id", c.id},
          {"sample_index", c.sample_index},
          {"status", std::string(to_string(c.outcome.status))},
          {"fitness", fitness_json(c.fitness())},
          {"wall_time_s", c.outcome.wall_time_s},
          {"diagnostics", c.outcome.diagnostics},
          {"code", c.code},
          {"idea", c.idea ? nlohmann::json(*c.idea) : nlohmann::json(nullptr)},
          {"parent_ids", c.parent_ids},
          {"hash", c.normalized_hash}};
}

nlohmann::json to_json(const RunSummary& s) {
  nlohmann::json archive = nlohmann::json::array();
  for (const auto& c : s.archive) archive.push_back(candidate_json(c));
  return {{"reason", s.reason},
          {"samples_used", s.samples_used},
          {"generations", s.generations},
          {"wall_time_s", s.wall_time_s},
          {"best", s.best ? candidate_json(*s.best) : nlohmann::json(nullptr)},
          {"archive", archive},
          {"method_state", s.method_state}};
}

Coordinator::Coordinator(RunContext ctx)
    : ctx_(std::move(ctx)),
      prompts_(ctx_.task, ctx_.method.method),
      multi_(is_multi_objective(ctx_.method.method)),
      timeout_s_(sandbox::effective_timeout(ctx_.task, ctx_.budget.eval_timeout_s)),
      rng_(ctx_.method.rng_seed),
      start_(now_seconds()) {
  ctx_.budget.validate();
  ctx_.method.validate();
}

std::int64_t Coordinator::remaining() const noexcept { return budget_remaining(ctx_.budget, samples_used_); }

bool Coordinator::stop_requested() const { return ctx_.stop && ctx_.stop->load(); }

bool Coordinator::done() const {
  if (finished_ || error_ || stopped_ || stop_requested() || remaining() == 0) return true;
  return ctx_.budget.max_generations && generation_ >= *ctx_.budget.max_generations;
}

void Coordinator::emit(EventKind kind, nlohmann::json payload) {
  RunEvent e{seq_++, now_seconds(), kind, std::move(payload)};
  if (!ctx_.sink) return;
  try {
    ctx_.sink->record(e);
  } catch (const std::exception& ex) {
    // Sink failure aborts the run; try once to log why.
    if (kind != EventKind::Error && kind != EventKind::RunEnd) {
      try {
        ctx_.sink->record({seq_++, now_seconds(), EventKind::Error, {{"message", std::string("event log failed: ") + ex.what()}}});
      } catch (...) {
      }
    }
    throw;
  }
}

void Coordinator::track(const Candidate& c) {
  if (!c.valid()) return;
  bool improved = false;
  if (multi_) {
    improved = archive_.offer(c);
    if (!best_ || better_scalar(c, *best_)) best_ = c;
  } else if (!best_ || better_scalar(c, *best_)) {
    best_ = c;
    improved = true;
  }
  if (improved) {
    emit(EventKind::NewBest, {{"candidate_id", c.id}, {"sample_index", c.sample_index}, {"fitness", fitness_json(c.fitness())}});
  }
}

std::vector<CandidateId> Coordinator::archive_ids() const {
  if (multi_) return archive_.ids();
  if (best_) return {best_->id};
  return {};
}

Candidate Coordinator::evaluate_seed() {
  Candidate c;
  c.id = next_id_++;
  c.code = ctx_.task.template_program().source;
  c.idea = "template program";
  c.sample_index = kSeedSampleIndex;
  c.normalized_hash = codekit::code_hash(c.code);
  c.outcome = sandbox::evaluate(c.code, ctx_.task, timeout_s_, multi_);
  auto payload = candidate_json(c);
  payload["seed"] = true;
  emit(EventKind::EvalFinished, std::move(payload));
  track(c);
  return c;
}

std::vector<std::optional<Candidate>> Coordinator::sample(std::vector<llm::Prompt> prompts) {
  std::vector<std::optional<Candidate>> out(prompts.size());
  if (done()) {
    if (stop_requested()) stopped_ = true;
    return out;
  }
  const auto n = std::min<std::size_t>(prompts.size(), static_cast<std::size_t>(remaining()));
  std::vector<llm::Prompt> batch(prompts.begin(), prompts.begin() + static_cast<std::ptrdiff_t>(n));
  const auto results = llm::draw_batch(ctx_.sampler, batch, static_cast<std::size_t>(ctx_.method.num_samplers),
                                       [this] { return stop_requested(); });

  // Build candidates in prompt order; skipped prompts cost nothing.
  std::vector<std::size_t> drawn;
  for (std::size_t i = 0; i < n; ++i) {
    if (results[i].skipped) {
      stopped_ = true;
      continue;
    }
    drawn.push_back(i);
    Candidate c;
    c.id = next_id_++;
    c.sample_index = samples_used_++;
    if (const auto it = batch[i].metadata.find("parent_ids"); it != batch[i].metadata.end()) {
      c.parent_ids = it->get<std::vector<CandidateId>>();
    }
    out[i] = std::move(c);
  }

  std::vector<bool> needs_eval(n, false);
  for (auto i : drawn) {
    auto& c = *out[i];
    const auto& r = results[i];
    if (!r.ok()) {
      c.outcome = EvalOutcome::failure(EvalStatus::SampleError, r.error, 0.0);
      continue;
    }
    auto tp = ctx_.task.template_program();
    const auto target = batch[i].metadata.find("target_function");
    if (target != batch[i].metadata.end()) tp.function_name = target->get<std::string>();
    c.idea = codekit::extract_idea(*r.text);
    try {
      c.code = codekit::extract_candidate(*r.text, tp);
      if (tp.function_name != ctx_.task.template_program().function_name) {
        c.code = rename_function(c.code, tp.function_name, ctx_.task.template_program().function_name);
      }
      c.normalized_hash = codekit::code_hash(c.code);
      needs_eval[i] = true;
    } catch (const ParseError& e) {
      c.outcome = EvalOutcome::failure(EvalStatus::ParseError, e.what(), 0.0);
    }
  }

  parallel_for(n, static_cast<std::size_t>(ctx_.method.num_evaluators), [&](std::size_t i) {
    if (!needs_eval[i]) return;
    auto& c = *out[i];
    if (stop_requested()) {
      c.outcome = EvalOutcome::failure(EvalStatus::RuntimeError, "evaluation skipped: run stopped", 0.0);
      return;
    }
    c.outcome = sandbox::evaluate(c.code, ctx_.task, timeout_s_, multi_);
  });

  std::size_t sample_errors = 0;
  for (auto i : drawn) {
    const auto& c = *out[i];
    emit(EventKind::SampleDrawn, {{"candidate_id", c.id},
                                  {"sample_index", c.sample_index},
                                  {"prompt", llm::to_json(batch[i])},
                                  {"response", results[i].text ? nlohmann::json(*results[i].text) : nlohmann::json(nullptr)}});
    emit(EventKind::EvalFinished, candidate_json(c));
    track(c);
    if (c.outcome.status == EvalStatus::SampleError) ++sample_errors;
  }
  // Draw failures racing a stop request end the run as stopped, not failed.
  if (!drawn.empty() && sample_errors == drawn.size() && !stop_requested()) {
    nlohmann::json errors = nlohmann::json::array();
    for (auto i : drawn) errors.push_back(results[i].error);
    emit(EventKind::Error, {{"message", "every sample in the generation failed"}, {"errors", errors}});
    error_ = true;
  }
  return out;
}

void Coordinator::end_generation(std::size_t population_size) {
  emit(EventKind::GenerationEnd, {{"generation", generation_},
                                  {"samples_used", samples_used_},
                                  {"best_fitness", best_ ? fitness_json(best_->fitness()) : nlohmann::json(nullptr)},
                                  {"population_size", population_size},
                                  {"archive", ids_json(archive_ids())}});
  ++generation_;
}

RunSummary Coordinator::finish(nlohmann::json method_state) {
  if (finished_) throw ContractViolation("run already finished");
  RunSummary s;
  if (error_) s.reason = "error";
  else if (stopped_ || stop_requested()) s.reason = "stopped";
  else if (remaining() == 0) s.reason = "budget";
  else if (ctx_.budget.max_generations && generation_ >= *ctx_.budget.max_generations) s.reason = "max_generations";
  else s.reason = "stopped";
  s.samples_used = samples_used_;
  s.generations = generation_;
  s.wall_time_s = now_seconds() - start_;
  s.best = best_;
  if (multi_) s.archive = archive_.members();
  else if (best_) s.archive = {*best_};
  s.method_state = std::move(method_state);
  nlohmann::json best_id = best_ ? nlohmann::json(best_->id) : nlohmann::json(nullptr);
  emit(EventKind::RunEnd, {{"reason", s.reason},
                           {"samples_used", s.samples_used},
                           {"generations", s.generations},
                           {"wall_time_s", s.wall_time_s},
                           {"best_id", best_id},
                           {"archive_ids", ids_json(archive_ids())},
                           {"method_state", s.method_state}});
  finished_ = true;
  return s;
}

}  // namespace hforge::search
