#pragma once

#include <iosfwd>

namespace aeropipe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `aeropipe` tool. Configuration is layered: built-in
/// defaults, then `--config` (or $AEROPIPE_CONFIG), then $AEROPIPE_DATA_DIR,
/// then command-line flags.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aeropipe::cli
