#pragma once

#include <string_view>

#include <nlohmann/json.hpp>

namespace hforge::service {

/// Reads the TOML subset used by run configs into a JSON object:
/// `[table]` and `[dotted.table]` headers, `key = value` pairs with bare or
/// quoted keys, basic/literal strings (single and triple quoted), integers,
/// floats, booleans, and arrays (which may span lines). Comments start with
/// `#`. Inline tables, dates and arrays of tables are not supported.
///
/// Throws ConfigError("line N: ...") on malformed input or duplicate keys.
nlohmann::json parse_toml(std::string_view text);

}  // namespace hforge::service
