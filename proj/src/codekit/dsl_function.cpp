#include "hforge/codekit/dsl_function.hpp"

#include <algorithm>

#include "hforge/codekit/template_program.hpp"
#include "hforge/codekit/text_util.hpp"
#include "hforge/core/errors.hpp"

namespace hforge::codekit {

namespace {

std::string_view strip_comment(std::string_view line) {
  auto pos = line.find('#');
  return pos == std::string_view::npos ? line : line.substr(0, pos);
}

int paren_balance(std::string_view s) {
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
  }
  return depth;
}

// Joins physical lines into logical statements (open parentheses continue a line).
std::vector<std::string> logical_statements(const std::vector<std::string_view>& lines) {
  std::vector<std::string> out;
  std::string pending;
  int depth = 0;
  for (auto raw : lines) {
    auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (!pending.empty()) pending += ' ';
    pending += line;
    depth += paren_balance(line);
    if (depth <= 0 && (pending.empty() || pending.back() != '\\')) {
      out.push_back(pending);
      pending.clear();
      depth = 0;
    } else if (!pending.empty() && pending.back() == '\\') {
      pending.pop_back();
    }
  }
  if (!pending.empty()) throw ParseError("unbalanced parentheses in function body");
  return out;
}

// Drops a leading docstring from the body lines.
std::size_t skip_docstring(const std::vector<std::string_view>& body) {
  std::size_t i = 0;
  while (i < body.size() && is_blank(body[i])) ++i;
  if (i >= body.size()) return i;
  auto first = trim(body[i]);
  std::string_view quote;
  if (first.substr(0, 3) == "\"\"\"") quote = "\"\"\"";
  else if (first.substr(0, 3) == "'''") quote = "'''";
  else return 0;
  if (first.size() >= 6 && first.substr(3).find(quote) != std::string_view::npos) return i + 1;
  for (std::size_t j = i + 1; j < body.size(); ++j) {
    if (body[j].find(quote) != std::string_view::npos) return j + 1;
  }
  throw ParseError("unterminated docstring");
}

}  // namespace

DslFunction compile_function(std::string_view code, std::string_view name, std::size_t arity) {
  const auto lines = split_lines(code);
  std::size_t def_line = std::string::npos;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto n = def_name(lines[i]);
    if (n.empty()) continue;
    if (n == name) {
      def_line = i;
      break;
    }
    if (def_line == std::string::npos) def_line = i;
  }
  if (def_line == std::string::npos) throw ParseError("no function definition found");

  DslFunction fn;
  fn.name = std::string(def_name(lines[def_line]));

  std::string header;
  std::size_t i = def_line;
  int depth = 0;
  for (; i < lines.size(); ++i) {
    header += lines[i];
    header += ' ';
    depth += paren_balance(lines[i]);
    if (depth <= 0) break;
  }
  if (depth > 0) throw ParseError("unterminated function signature");
  const auto open = header.find('(');
  const auto close = header.rfind(')');
  for (const auto& p : parse_parameter_list(std::string_view(header).substr(open + 1, close - open - 1))) {
    fn.params.push_back(p.name);
  }
  if (fn.params.size() != arity) {
    throw ParseError("function takes " + std::to_string(fn.params.size()) + " parameters, expected " +
                     std::to_string(arity));
  }

  // Inline one-liner: `def f(x): return x`.
  auto after_colon = trim(std::string_view(header).substr(header.find(':', close) + 1));
  std::vector<std::string_view> body;
  std::string inline_body;
  if (!after_colon.empty()) {
    inline_body = std::string(after_colon);
    body.push_back(inline_body);
  }
  const auto base = indent_of(lines[def_line]);
  for (std::size_t b = i + 1; b < lines.size(); ++b) {
    if (!is_blank(lines[b]) && indent_of(lines[b]) <= base) break;
    body.push_back(lines[b]);
  }
  body.erase(body.begin(), body.begin() + static_cast<long>(skip_docstring(body)));

  ExprLocals locals;
  for (const auto& stmt : logical_statements(body)) {
    std::string_view s = stmt;
    if (s == "pass") continue;
    if (s.substr(0, 7) == "return " || s.substr(0, 7) == "return(") {
      fn.body = parse_expression(s.substr(6), fn.params, &locals);
      return fn;
    }
    // Assignment, possibly augmented.
    auto eq = s.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ParseError("unsupported statement: " + stmt);
    }
    char aug = 0;
    auto lhs = s.substr(0, eq);
    if (!lhs.empty() && std::string_view("+-*/").find(lhs.back()) != std::string_view::npos) {
      aug = lhs.back();
      lhs.remove_suffix(1);
    }
    if (eq + 1 < s.size() && s[eq + 1] == '=') throw ParseError("unsupported statement: " + stmt);
    lhs = trim(lhs);
    if (!is_identifier(lhs)) throw ParseError("unsupported assignment target: " + std::string(lhs));
    if (std::find(fn.params.begin(), fn.params.end(), lhs) != fn.params.end()) {
      throw ParseError("cannot reassign parameter '" + std::string(lhs) + "'");
    }
    std::string rhs(trim(s.substr(eq + 1)));
    if (aug) {
      if (!locals.contains(lhs)) throw ParseError("augmented assignment to undefined name " + std::string(lhs));
      rhs = std::string(lhs) + " " + aug + " (" + rhs + ")";
    }
    auto value = parse_expression(rhs, fn.params, &locals);
    locals.insert_or_assign(std::string(lhs), std::move(value));
  }
  throw ParseError("function has no return statement");
}

}  // namespace hforge::codekit
