#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace notchkit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `notch` invocation. `args` excludes the program name.
int exec_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace notchkit
