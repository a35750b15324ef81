#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hforge::codekit {

std::vector<std::string_view> split_lines(std::string_view text);
std::string_view trim(std::string_view s);
std::size_t indent_of(std::string_view line);
bool is_blank(std::string_view line);
bool is_identifier(std::string_view s);
/// Returns the function name if `line` (after indentation) starts a `def`.
std::string_view def_name(std::string_view line);

}  // namespace hforge::codekit
