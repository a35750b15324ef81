#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>

#include "hforge/core/candidate.hpp"
#include "hforge/llm/sampler.hpp"
#include "hforge/search/method_config.hpp"
#include "hforge/tasks/task.hpp"

namespace hforge::search {

/// Bumped whenever a file under prompts/ changes wording.
inline constexpr std::string_view kPromptSetVersion = "1";

/// Text of prompts/<name>.txt, embedded at build time. Throws
/// ContractViolation for an unknown name.
std::string_view prompt_text(std::string_view name);

/// Replaces `{key}` for keys present in `vars`; other braces are left alone.
/// Substituted values are not rescanned.
std::string render(std::string_view text, const std::map<std::string, std::string, std::less<>>& vars);

/// Renames the first `def from(` to `def to(`.
std::string rename_function(std::string_view code, std::string_view from, std::string_view to);

/// Builds every prompt the search methods send. Metadata always carries
/// method, operator, parent_ids and prompt_set; FunSearch prompts add island
/// and target_function (the versioned name the answer is expected to define).
class PromptBuilder {
 public:
  PromptBuilder(const tasks::Task& task, Method method);

  llm::Prompt init() const;
  llm::Prompt modify(const Candidate& parent) const;
  llm::Prompt perturb(const Candidate& parent) const;
  /// `level` in 1..levels, mapped onto three escalating wordings.
  llm::Prompt vns(const Candidate& parent, int level, int levels) const;
  /// op is one of e1, e2 (two parents), m1, m2 (one parent).
  llm::Prompt eoh(std::string_view op, std::span<const Candidate* const> parents) const;
  /// `worse_first` holds 1 or 2 programs ordered worse to better.
  llm::Prompt funsearch(std::span<const Candidate* const> worse_first, int island) const;

 private:
  llm::Prompt make(std::string_view file, std::string_view op, std::span<const Candidate* const> parents,
                   std::map<std::string, std::string, std::less<>> extra = {}) const;
  std::string describe(std::span<const Candidate* const> parents) const;

  const tasks::Task& task_;
  Method method_;
  std::string description_;
  std::string stub_;
};

}  // namespace hforge::search
