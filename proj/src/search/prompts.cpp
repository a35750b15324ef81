#include "hforge/search/prompts.hpp"

#include <cstdio>

#include "hforge/codekit/text_util.hpp"
#include "hforge/core/errors.hpp"

namespace hforge::search {

namespace detail {
extern const std::pair<std::string_view, std::string_view> kPromptTable[];
extern const std::size_t kPromptCount;
}  // namespace detail

std::string_view prompt_text(std::string_view name) {
  for (std::size_t i = 0; i < detail::kPromptCount; ++i) {
    if (detail::kPromptTable[i].first == name) return detail::kPromptTable[i].second;
  }
  throw ContractViolation("no prompt file named '" + std::string(name) + "'");
}

std::string render(std::string_view text, const std::map<std::string, std::string, std::less<>>& vars) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      const auto close = text.find('}', i + 1);
      if (close != std::string_view::npos) {
        if (auto it = vars.find(text.substr(i + 1, close - i - 1)); it != vars.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += text[i++];
  }
  return out;
}

std::string rename_function(std::string_view code, std::string_view from, std::string_view to) {
  std::string out(code);
  const std::string needle = "def " + std::string(from) + "(";
  if (auto at = out.find(needle); at != std::string::npos) {
    out.replace(at, needle.size(), "def " + std::string(to) + "(");
  }
  return out;
}

namespace {

std::string format_fitness(const MaybeFitness& f) {
  if (!f) return "invalid";
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < f->size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g", (*f)[i]);
    if (i) out += ", ";
    out += buf;
  }
  return out;
}

std::string fenced(const std::string& code) {
  std::string out = "```python\n" + code;
  if (!out.empty() && out.back() != '\n') out += '\n';
  return out + "```\n";
}

}  // namespace

PromptBuilder::PromptBuilder(const tasks::Task& task, Method method)
    : task_(task), method_(method), description_(task.description()), stub_(task.template_program().stub()) {
  if (is_multi_objective(method)) {
    description_ +=
        "\n\nCandidates are ranked on two objectives, both lower-is-better: the task score and "
        "the size of the function body.";
  }
}

std::string PromptBuilder::describe(std::span<const Candidate* const> parents) const {
  const char* label = is_multi_objective(method_) ? "Objectives (score, size)" : "Score";
  std::string out;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const auto& p = *parents[i];
    if (parents.size() > 1) out += "\nAlgorithm " + std::to_string(i + 1) + ":\n";
    else out += "\n";
    out += "Idea: " + p.idea.value_or("(not described)") + "\n";
    out += std::string(label) + ": " + format_fitness(p.fitness()) + " (lower is better)\n";
    out += fenced(p.code);
  }
  return out;
}

llm::Prompt PromptBuilder::make(std::string_view file, std::string_view op, std::span<const Candidate* const> parents,
                                std::map<std::string, std::string, std::less<>> extra) const {
  extra.emplace("task", description_);
  extra.emplace("stub", stub_);
  extra.emplace("parents", describe(parents));
  llm::Prompt p;
  p.system = std::string(prompt_text("system"));
  while (!p.system.empty() && p.system.back() == '\n') p.system.pop_back();
  p.user = render(prompt_text(file), extra);
  nlohmann::json ids = nlohmann::json::array();
  for (const auto* c : parents) ids.push_back(c->id);
  p.metadata = {{"method", std::string(to_string(method_))},
                {"operator", std::string(op)},
                {"parent_ids", ids},
                {"prompt_set", std::string(kPromptSetVersion)}};
  return p;
}

llm::Prompt PromptBuilder::init() const { return make("init", "init", {}); }

llm::Prompt PromptBuilder::modify(const Candidate& parent) const {
  const Candidate* ps[] = {&parent};
  return make("modify", "modify", ps);
}

llm::Prompt PromptBuilder::perturb(const Candidate& parent) const {
  const Candidate* ps[] = {&parent};
  return make("perturb", "perturb", ps);
}

llm::Prompt PromptBuilder::vns(const Candidate& parent, int level, int levels) const {
  if (level < 1 || level > levels) throw ContractViolation("VNS level out of range");
  const int wording = 1 + (level - 1) * 3 / levels;
  const Candidate* ps[] = {&parent};
  auto p = make("vns_" + std::to_string(wording), "vns_" + std::to_string(level), ps);
  p.metadata["level"] = level;
  return p;
}

llm::Prompt PromptBuilder::eoh(std::string_view op, std::span<const Candidate* const> parents) const {
  if (op != "e1" && op != "e2" && op != "m1" && op != "m2") throw ContractViolation("unknown EoH operator");
  if (parents.empty()) throw ContractViolation("EoH operators need at least one parent");
  return make("eoh_" + std::string(op), op, parents);
}

llm::Prompt PromptBuilder::funsearch(std::span<const Candidate* const> worse_first, int island) const {
  if (worse_first.empty()) throw ContractViolation("FunSearch prompts need at least one program");
  const auto& name = task_.template_program().function_name;
  std::string versions;
  for (std::size_t i = 0; i < worse_first.size(); ++i) {
    const auto versioned = name + "_v" + std::to_string(i);
    if (i) versions += "\n\n";
    std::string code = rename_function(worse_first[i]->code, name, versioned);
    if (!code.empty() && code.back() != '\n') code += '\n';
    versions += code;
  }
  const auto next = name + "_v" + std::to_string(worse_first.size());
  const auto prev = name + "_v" + std::to_string(worse_first.size() - 1);
  auto p = make("funsearch", "funsearch", worse_first,
                {{"versions", versions}, {"next_version", next}, {"previous_version", prev}});
  p.metadata["island"] = island;
  p.metadata["target_function"] = next;
  return p;
}

}  // namespace hforge::search
