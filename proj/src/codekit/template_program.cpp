#include "hforge/codekit/template_program.hpp"

#include <sstream>

#include "hforge/codekit/text_util.hpp"
#include "hforge/core/errors.hpp"

namespace hforge::codekit {

namespace {

// Splits on commas at bracket depth zero.
std::vector<std::string_view> split_top_level(std::string_view text) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(text.substr(start));
  return parts;
}

std::string dedent_block(const std::vector<std::string_view>& lines) {
  std::size_t common = std::string::npos;
  for (auto l : lines) {
    if (!is_blank(l)) common = std::min(common, indent_of(l));
  }
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto l = lines[i];
    std::size_t drop = 0;
    std::size_t width = 0;
    while (drop < l.size() && width < common && (l[drop] == ' ' || l[drop] == '\t')) {
      width += l[drop] == '\t' ? 4 : 1;
      ++drop;
    }
    out += l.substr(drop);
    if (i + 1 < lines.size()) out += '\n';
  }
  return std::string(trim(out));
}

}  // namespace

std::vector<Parameter> parse_parameter_list(std::string_view text) {
  std::vector<Parameter> params;
  if (trim(text).empty()) return params;
  for (auto part : split_top_level(text)) {
    auto p = trim(part);
    if (p.empty()) continue;  // trailing comma
    if (auto eq = p.find('='); eq != std::string_view::npos) p = trim(p.substr(0, eq));
    Parameter param;
    if (auto colon = p.find(':'); colon != std::string_view::npos) {
      param.type_tag = std::string(trim(p.substr(colon + 1)));
      p = trim(p.substr(0, colon));
    }
    if (!p.empty() && p.front() == '*') throw ParseError("variadic parameters are not supported");
    if (!is_identifier(p)) throw ParseError("invalid parameter name: " + std::string(p));
    param.name = std::string(p);
    params.push_back(std::move(param));
  }
  return params;
}

std::string TemplateProgram::signature() const {
  std::string s = "def " + function_name + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) s += ", ";
    s += params[i].name;
    if (!params[i].type_tag.empty()) s += ": " + params[i].type_tag;
  }
  s += ")";
  if (!return_annotation.empty()) s += " -> " + return_annotation;
  s += ":";
  return s;
}

std::string TemplateProgram::stub() const {
  std::ostringstream out;
  out << signature() << "\n    \"\"\"";
  auto lines = split_lines(docstring);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out << "\n" << (is_blank(lines[i]) ? "" : "    ");
    out << lines[i];
  }
  out << "\n    \"\"\"\n";
  return out.str();
}

std::string TemplateProgram::assemble() const {
  std::string out;
  if (!preamble.empty()) out += preamble + "\n\n";
  out += stub();
  out += body;
  if (!out.empty() && out.back() != '\n') out += '\n';
  return out;
}

TemplateProgram parse_template(std::string_view source) {
  auto lines = split_lines(source);
  std::vector<std::size_t> defs;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (indent_of(lines[i]) == 0 && !def_name(lines[i]).empty()) defs.push_back(i);
  }
  if (defs.empty()) throw TemplateError("template has no top-level function");
  if (defs.size() > 1) throw TemplateError("template must contain exactly one top-level function");

  TemplateProgram tp;
  tp.source = std::string(source);
  const std::size_t def_line = defs.front();
  {
    std::vector<std::string_view> pre(lines.begin(), lines.begin() + static_cast<long>(def_line));
    std::string joined;
    for (std::size_t i = 0; i < pre.size(); ++i) {
      joined += pre[i];
      if (i + 1 < pre.size()) joined += '\n';
    }
    tp.preamble = std::string(trim(joined));
  }

  // The header may wrap over several lines until the parenthesis closes.
  std::string header;
  std::size_t i = def_line;
  int depth = 0;
  for (; i < lines.size(); ++i) {
    header += std::string(trim(lines[i])) + " ";
    for (char c : lines[i]) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
    }
    if (depth <= 0) break;
  }
  if (depth > 0) throw TemplateError("unterminated function signature");
  ++i;
  tp.function_name = std::string(def_name(header));
  auto open = header.find('(');
  auto close = header.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    throw TemplateError("malformed function signature");
  }
  try {
    tp.params = parse_parameter_list(std::string_view(header).substr(open + 1, close - open - 1));
  } catch (const ParseError& e) {
    throw TemplateError(e.what());
  }
  if (tp.params.empty()) throw TemplateError("template function must take parameters");
  auto tail = trim(std::string_view(header).substr(close + 1));
  if (tail.substr(0, 2) == "->") {
    auto colon = tail.rfind(':');
    tp.return_annotation = std::string(trim(tail.substr(2, colon - 2)));
  }

  std::size_t body_end = i;
  while (body_end < lines.size() && (is_blank(lines[body_end]) || indent_of(lines[body_end]) > 0)) {
    ++body_end;
  }
  if (body_end < lines.size()) throw TemplateError("unexpected top-level code after the function");

  std::size_t k = i;
  while (k < body_end && is_blank(lines[k])) ++k;
  if (k >= body_end) throw TemplateError("template function has no docstring");
  auto first = trim(lines[k]);
  std::string_view quote;
  if (first.substr(0, 3) == "\"\"\"") quote = "\"\"\"";
  if (first.substr(0, 3) == "'''") quote = "'''";
  if (quote.empty()) throw TemplateError("template function has no docstring");

  std::vector<std::string_view> doc_lines;
  auto rest = first.substr(3);
  std::size_t doc_end = k;
  if (auto pos = rest.find(quote); pos != std::string_view::npos) {
    doc_lines.push_back(rest.substr(0, pos));
  } else {
    doc_lines.push_back(rest);
    bool closed = false;
    for (doc_end = k + 1; doc_end < body_end; ++doc_end) {
      auto l = lines[doc_end];
      if (auto pos2 = l.find(quote); pos2 != std::string_view::npos) {
        doc_lines.push_back(l.substr(0, pos2));
        closed = true;
        break;
      }
      doc_lines.push_back(l);
    }
    if (!closed) throw TemplateError("unterminated docstring");
  }
  // The first docstring line starts right after the quotes; indent it like the rest.
  std::string first_doc(trim(doc_lines.front()));
  doc_lines.erase(doc_lines.begin());
  std::string rest_doc = dedent_block(doc_lines);
  tp.docstring = std::string(trim(first_doc + (rest_doc.empty() ? "" : "\n" + rest_doc)));
  if (tp.docstring.empty()) throw TemplateError("template docstring is empty");

  std::string body;
  for (std::size_t b = doc_end + 1; b < body_end; ++b) {
    body += lines[b];
    body += '\n';
  }
  while (!body.empty() && (body.back() == '\n' || body.back() == ' ')) body.pop_back();
  if (!body.empty()) body += '\n';
  tp.body = body;
  return tp;
}

}  // namespace hforge::codekit
