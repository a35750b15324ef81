#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "hforge/codekit/template_program.hpp"

namespace hforge::codekit {

/// Pulls candidate code out of raw sampler text.
///
/// The first fenced block that contains a function definition wins; without
/// fences the response is scanned for a bare `def`. Inside the chosen text the
/// target is the function named like the template if present, else the first
/// one. It is renamed to `template_program.function_name` and must take as many
/// parameters as the template. Throws ParseError when nothing usable is found.
std::string extract_candidate(std::string_view response, const TemplateProgram& template_program);

/// Natural-language description of the algorithm: the first `{...}` group
/// outside code fences, else the prose before the first fence or `def`.
std::optional<std::string> extract_idea(std::string_view response);

}  // namespace hforge::codekit
