#pragma once

#include <iosfwd>

namespace dynnorm {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes of the command-line front end.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;  // failed verification or fit
inline constexpr int kUsage = 2;   // bad flags or malformed input
inline constexpr int kIo = 3;      // filesystem failure
}  // namespace exit_code

/// Entry point of the `dynnorm` tool: subcommands verify, simulate, fit and
/// figures. Never throws; always returns one of the exit_code values.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dynnorm
