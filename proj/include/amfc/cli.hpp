#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace amfc {

inline constexpr std::string_view kVersion = "1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// Runs one subcommand. args[0] is the program name. Machine-readable output
/// goes to `out` (or the --out file), diagnostics to `err`.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace amfc
