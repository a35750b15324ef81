#include "hforge/codekit/extract.hpp"

#include <vector>

#include "hforge/codekit/text_util.hpp"
#include "hforge/core/errors.hpp"

namespace hforge::codekit {

namespace {

struct Block {
  std::vector<std::string_view> lines;
};

bool is_fence(std::string_view line) { return trim(line).substr(0, 3) == "```"; }

std::vector<Block> fenced_blocks(const std::vector<std::string_view>& lines) {
  std::vector<Block> blocks;
  bool inside = false;
  for (auto line : lines) {
    if (is_fence(line)) {
      if (inside) {
        inside = false;
      } else {
        inside = true;
        blocks.emplace_back();
      }
      continue;
    }
    if (inside) blocks.back().lines.push_back(line);
  }
  return blocks;
}

// Index of the def line for the target function inside `lines`, or npos.
std::size_t find_target(const std::vector<std::string_view>& lines, std::string_view name) {
  std::size_t first = std::string::npos;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto n = def_name(lines[i]);
    if (n.empty()) continue;
    if (n == name) return i;
    if (first == std::string::npos) first = i;
  }
  return first;
}

// Extent [def_line, end) of a function: the header plus following lines that are
// blank or indented deeper than the def.
std::size_t function_end(const std::vector<std::string_view>& lines, std::size_t def_line) {
  const auto base = indent_of(lines[def_line]);
  std::size_t i = def_line;
  int depth = 0;
  for (; i < lines.size(); ++i) {
    for (char c : lines[i]) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
    }
    if (depth <= 0) break;
  }
  ++i;
  while (i < lines.size() && (is_blank(lines[i]) || indent_of(lines[i]) > base)) ++i;
  while (i > def_line + 1 && is_blank(lines[i - 1])) --i;
  return i;
}

std::size_t count_params(const std::vector<std::string_view>& lines, std::size_t def_line,
                         std::size_t end) {
  std::string joined;
  for (std::size_t i = def_line; i < end; ++i) {
    joined += lines[i];
    joined += ' ';
  }
  const auto open = joined.find('(');
  int depth = 0;
  for (std::size_t i = open; i < joined.size(); ++i) {
    if (joined[i] == '(') ++depth;
    if (joined[i] == ')' && --depth == 0) {
      return parse_parameter_list(std::string_view(joined).substr(open + 1, i - open - 1)).size();
    }
  }
  throw ParseError("unterminated function signature");
}

std::string rename_def(std::string_view line, std::string_view old_name, std::string_view new_name) {
  auto pos = line.find("def");
  auto name_pos = line.find(old_name, pos + 3);
  std::string out(line.substr(0, name_pos));
  out += new_name;
  out += line.substr(name_pos + old_name.size());
  return out;
}

std::string build_code(const std::vector<std::string_view>& lines, std::size_t begin,
                       std::size_t end, std::size_t def_line, const TemplateProgram& tp) {
  const auto target_end = function_end(lines, def_line);
  const auto arity = count_params(lines, def_line, target_end);
  if (arity != tp.params.size()) {
    throw ParseError("function takes " + std::to_string(arity) + " parameters, expected " +
                     std::to_string(tp.params.size()));
  }
  // Common indentation of the kept region, so a nested example dedents cleanly.
  std::size_t common = std::string::npos;
  for (std::size_t i = begin; i < end; ++i) {
    if (!is_blank(lines[i])) common = std::min(common, indent_of(lines[i]));
  }
  if (common == std::string::npos) common = 0;
  std::string code;
  const auto old_name = def_name(lines[def_line]);
  for (std::size_t i = begin; i < end; ++i) {
    auto line = lines[i];
    std::size_t drop = 0;
    std::size_t width = 0;
    while (drop < line.size() && width < common && (line[drop] == ' ' || line[drop] == '\t')) {
      width += line[drop] == '\t' ? 4 : 1;
      ++drop;
    }
    line = line.substr(drop);
    if (i == def_line) {
      code += rename_def(line, old_name, tp.function_name);
    } else {
      code += line;
    }
    code += '\n';
  }
  while (code.size() > 1 && code[code.size() - 2] == '\n') code.pop_back();
  return code;
}

}  // namespace

std::string extract_candidate(std::string_view response, const TemplateProgram& tp) {
  const auto lines = split_lines(response);
  for (const auto& block : fenced_blocks(lines)) {
    auto def_line = find_target(block.lines, tp.function_name);
    if (def_line == std::string::npos) continue;
    // Keep the whole block so imports and helpers travel with the function.
    std::size_t begin = 0;
    std::size_t end = block.lines.size();
    while (begin < end && is_blank(block.lines[begin])) ++begin;
    while (end > begin && is_blank(block.lines[end - 1])) --end;
    return build_code(block.lines, begin, end, def_line, tp);
  }
  auto def_line = find_target(lines, tp.function_name);
  if (def_line == std::string::npos) throw ParseError("no function definition found in response");
  return build_code(lines, def_line, function_end(lines, def_line), def_line, tp);
}

std::optional<std::string> extract_idea(std::string_view response) {
  const auto lines = split_lines(response);
  std::string prose;
  bool inside = false;
  bool reached_code = false;
  std::string outside;
  for (auto line : lines) {
    if (is_fence(line)) {
      inside = !inside;
      reached_code = true;
      continue;
    }
    if (inside) continue;
    outside += line;
    outside += '\n';
    if (!reached_code && !def_name(line).empty()) reached_code = true;
    if (!reached_code) {
      prose += line;
      prose += '\n';
    }
  }
  if (auto open = outside.find('{'); open != std::string::npos) {
    int depth = 0;
    for (std::size_t i = open; i < outside.size(); ++i) {
      if (outside[i] == '{') ++depth;
      if (outside[i] == '}' && --depth == 0) {
        auto idea = trim(std::string_view(outside).substr(open + 1, i - open - 1));
        if (!idea.empty()) return std::string(idea);
        break;
      }
    }
  }
  auto idea = trim(prose);
  if (idea.empty()) return std::nullopt;
  constexpr std::size_t kMaxIdea = 1000;
  return std::string(idea.substr(0, kMaxIdea));
}

}  // namespace hforge::codekit
