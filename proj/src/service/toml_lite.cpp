#include "hforge/service/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <string>

#include "hforge/core/errors.hpp"

namespace hforge::service {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : s_(text) {}

  nlohmann::json parse() {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    while (true) {
      skip_blank_lines();
      if (eof()) break;
      if (peek() == '[') {
        table = &open_table(root);
      } else {
        auto key = read_key();
        skip_ws();
        expect('=');
        skip_ws();
        auto value = read_value();
        if (table->contains(key)) fail("duplicate key '" + key + "'");
        (*table)[key] = std::move(value);
      }
      end_of_line();
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line_) + ": " + what);
  }
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[pos_]; }
  char get() {
    const char c = s_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }
  bool starts_with(std::string_view t) const { return s_.substr(pos_).starts_with(t); }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    get();
  }
  void skip_ws() {
    while (peek() == ' ' || peek() == '\t') get();
  }
  void skip_comment() {
    if (peek() == '#') {
      while (!eof() && peek() != '\n') get();
    }
  }
  void skip_blank_lines() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() == '\r') get();
      if (peek() != '\n') return;
      get();
    }
  }
  // Whitespace, comments and newlines inside arrays.
  void skip_array_space() {
    while (!eof()) {
      skip_ws();
      skip_comment();
      if (peek() != '\n' && peek() != '\r') return;
      get();
    }
  }
  void end_of_line() {
    skip_ws();
    skip_comment();
    if (peek() == '\r') get();
    if (!eof() && peek() != '\n') fail("unexpected text after value");
  }

  nlohmann::json& open_table(nlohmann::json& root) {
    get();
    if (peek() == '[') fail("arrays of tables are not supported");
    nlohmann::json* t = &root;
    while (true) {
      skip_ws();
      auto part = read_key();
      skip_ws();
      auto& next = (*t)[part];
      if (next.is_null()) next = nlohmann::json::object();
      if (!next.is_object()) fail("'" + part + "' is not a table");
      t = &next;
      if (peek() == '.') {
        get();
        continue;
      }
      expect(']');
      return *t;
    }
  }

  std::string read_key() {
    if (peek() == '"') return read_basic_string();
    if (peek() == '\'') return read_literal_string();
    std::string key;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-') key += get();
    if (key.empty()) fail("expected a key");
    return key;
  }

  nlohmann::json read_value() {
    const char c = peek();
    if (starts_with("\"\"\"")) return read_multiline('"');
    if (starts_with("'''")) return read_multiline('\'');
    if (c == '"') return read_basic_string();
    if (c == '\'') return read_literal_string();
    if (c == '[') return read_array();
    if (c == '{') fail("inline tables are not supported");
    if (starts_with("true")) {
      pos_ += 4;
      return true;
    }
    if (starts_with("false")) {
      pos_ += 5;
      return false;
    }
    return read_number();
  }

  nlohmann::json read_array() {
    get();
    nlohmann::json arr = nlohmann::json::array();
    while (true) {
      skip_array_space();
      if (peek() == ']') {
        get();
        return arr;
      }
      arr.push_back(read_value());
      skip_array_space();
      if (peek() == ',') {
        get();
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  nlohmann::json read_number() {
    std::string tok;
    while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' || peek() == '-' ||
                      peek() == '.' || peek() == '_')) {
      if (peek() == '_') {
        get();
        continue;
      }
      tok += get();
    }
    if (tok.empty()) fail("expected a value");
    if (tok == "inf" || tok == "+inf" || tok == "-inf" || tok == "nan") fail("non-finite numbers are not allowed");
    const char* b = tok.data() + (tok[0] == '+' ? 1 : 0);
    const char* e = tok.data() + tok.size();
    const bool is_float = tok.find_first_of(".eE") != std::string::npos;
    if (!is_float) {
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(b, e, v);
      if (ec == std::errc() && p == e) return v;
    } else {
      double v = 0;
      auto [p, ec] = std::from_chars(b, e, v);
      if (ec == std::errc() && p == e) return v;
    }
    fail("invalid value '" + tok + "'");
  }

  void append_escape(std::string& out) {
    if (eof()) fail("unterminated string");
    const char c = get();
    switch (c) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      case '"': out += '"'; break;
      case '\\': out += '\\'; break;
      case 'b': out += '\b'; break;
      case 'f': out += '\f'; break;
      case 'u':
      case 'U': {
        const int n = c == 'u' ? 4 : 8;
        if (pos_ + n > s_.size()) fail("bad unicode escape");
        std::uint32_t cp = 0;
        auto [p, ec] = std::from_chars(s_.data() + pos_, s_.data() + pos_ + n, cp, 16);
        if (ec != std::errc() || p != s_.data() + pos_ + n) fail("bad unicode escape");
        pos_ += n;
        encode_utf8(cp, out);
        break;
      }
      default: fail(std::string("unknown escape \\") + c);
    }
  }

  static void encode_utf8(std::uint32_t cp, std::string& out) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  std::string read_basic_string() {
    get();
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '"') return out;
      if (c == '\\') append_escape(out);
      else out += c;
    }
  }

  std::string read_literal_string() {
    get();
    std::string out;
    while (true) {
      if (eof() || peek() == '\n') fail("unterminated string");
      const char c = get();
      if (c == '\'') return out;
      out += c;
    }
  }

  std::string read_multiline(char quote) {
    const std::string delim(3, quote);
    pos_ += 3;
    if (peek() == '\r') get();
    if (peek() == '\n') get();  // newline right after the opening quotes is trimmed
    std::string out;
    while (true) {
      if (eof()) fail("unterminated multi-line string");
      if (starts_with(delim)) {
        pos_ += 3;
        return out;
      }
      const char c = get();
      if (quote == '"' && c == '\\') {
        if (peek() == '\n' || peek() == '\r') {
          // line-ending backslash: drop the newline and following whitespace
          while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) get();
          continue;
        }
        append_escape(out);
      } else {
        out += c;
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

nlohmann::json parse_toml(std::string_view text) { return Reader(text).parse(); }

}  // namespace hforge::service
