#pragma once

#include <ostream>

namespace hforge::service {

/// Exit codes of the hforge command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

/// Subcommands: run, report, list-tasks, list-methods, serve, validate.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hforge::service
