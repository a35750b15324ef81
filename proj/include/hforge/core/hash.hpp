#pragma once

#include <string>
#include <string_view>

namespace hforge {

/// 64-bit FNV-1a digest rendered as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

}  // namespace hforge
