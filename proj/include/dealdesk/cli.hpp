#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dealdesk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitModuleError = 1;
inline constexpr int kExitConfigInvalid = 2;

/// Runs one `dealdesk` invocation. `args` excludes the program name. Reports go
/// to `out` unless --output names a file; diagnostics go to `err` as JSON.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dealdesk::cli
