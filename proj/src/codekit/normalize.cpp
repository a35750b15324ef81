#include "hforge/codekit/normalize.hpp"

#include <cctype>

#include "hforge/codekit/text_util.hpp"
#include "hforge/core/hash.hpp"

namespace hforge::codekit {

namespace {

std::string_view strip_comment(std::string_view line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        quote = 0;
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

}  // namespace

std::string normalize_code(std::string_view code) {
  std::string out;
  for (auto raw : split_lines(code)) {
    auto line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (!out.empty()) out += '\n';
    bool in_space = false;
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        in_space = true;
        continue;
      }
      if (in_space) out += ' ';
      in_space = false;
      out += c;
    }
  }
  return out;
}

std::string code_hash(std::string_view code) { return fnv1a_hex(normalize_code(code)); }

std::size_t token_count(std::string_view code) {
  const auto normalized = normalize_code(code);
  std::size_t count = 0;
  bool in_word = false;
  for (unsigned char c : normalized) {
    if (std::isalnum(c) || c == '_' || c == '.') {
      if (!in_word) ++count;
      in_word = true;
    } else {
      in_word = false;
      if (!std::isspace(c)) ++count;
    }
  }
  return count;
}

}  // namespace hforge::codekit
