#pragma once

#include "agedelay/config.hpp"

#include <iosfwd>
#include <string_view>

namespace agedelay
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_verdict = 2;

/// Runs one of kernel, eigen, steady-state, check-conditions, simulate, audit.
/// JSON documents go to `out` (and to <dir>/<name>.json when output.dir is set);
/// CSV artifacts go to output.dir. Returns 0, 2 for not-covered or undecided
/// verdicts, and throws on errors.
int dispatch(std::string_view subcommand, const RunConfig& config, std::ostream& out);

/// Command-line entry point: parses flags, loads the config and maps
/// exceptions to exit status 1 with a message on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace agedelay
