#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

/// Runs one `eit` invocation. args[0] is the program name. Normal output goes
/// to `out`; diagnostics, the seed line and usage text go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eit::cli
