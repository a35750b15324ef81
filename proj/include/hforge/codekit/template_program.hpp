#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hforge::codekit {

struct Parameter {
  std::string name;
  std::string type_tag;  // annotation text, empty when absent
};

/// The seed program the sampler is asked to complete: exactly one top-level
/// function with a docstring, preceded by optional imports/helpers.
struct TemplateProgram {
  std::string source;
  std::string function_name;
  std::vector<Parameter> params;
  std::string return_annotation;
  std::string docstring;
  std::string body;      // lines after the docstring, original indentation kept
  std::string preamble;  // everything before the `def` line

  /// `def name(a: t, b) -> r:`
  std::string signature() const;
  /// Rebuilds program text from the parsed parts.
  std::string assemble() const;
  /// Signature plus docstring, no body. Used in prompts.
  std::string stub() const;
};

/// Throws TemplateError for zero or several top-level functions, a missing or
/// empty docstring, an empty parameter list, or code after the function.
TemplateProgram parse_template(std::string_view source);

/// Parses a comma-separated parameter list (`a: float, b=2`). Names only are
/// validated; annotations are kept verbatim as type tags.
std::vector<Parameter> parse_parameter_list(std::string_view text);

}  // namespace hforge::codekit
