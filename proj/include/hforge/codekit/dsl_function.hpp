#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hforge/codekit/expr.hpp"

namespace hforge::codekit {

/// A candidate function restricted to the expression DSL:
///
///     def name(p1, p2):
///         """optional docstring"""
///         t = expr          # assignments, also += -= *= /=
///         return expr
///
/// Assignments are inlined, so `body` is a single expression over the params.
struct DslFunction {
  std::string name;
  std::vector<std::string> params;
  Expr body;
};

/// Compiles the function called `name` (or the first function when no function
/// has that name). Throws ParseError on unsupported statements, unknown
/// identifiers, a missing return, or an arity different from `arity`.
DslFunction compile_function(std::string_view code, std::string_view name, std::size_t arity);

}  // namespace hforge::codekit
