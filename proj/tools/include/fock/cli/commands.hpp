#pragma once

#include <iosfwd>

namespace fock::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

/// Entry point of the `fock` tool. Results go to --out, or to `out` when no
/// file is given; messages go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fock::cli
