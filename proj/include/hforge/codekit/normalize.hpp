#pragma once

#include <string>
#include <string_view>

namespace hforge::codekit {

/// Deduplication form of program text: `#` comments stripped, whitespace runs
/// collapsed to one space, lines trimmed, blank lines dropped. Idempotent.
std::string normalize_code(std::string_view code);

/// Digest of normalize_code(code).
std::string code_hash(std::string_view code);

/// Lexical token count of normalized code: identifier/number runs count once,
/// every other non-space character counts once.
std::size_t token_count(std::string_view code);

}  // namespace hforge::codekit
