#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace schurdil::cli {

/// Exit-code contract of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kNonConvergence = 2,
  kIo = 3,
};

/// Version tag of the error object written to stderr on failure:
///   {"schema": "schurdil.error/1", "exit_code": c, "kind": "...", "message": "..."}
inline constexpr const char* kErrorSchema = "schurdil.error/1";

/// Environment variable overriding the default ambient dimension cap.
inline constexpr const char* kDimCapEnv = "SCHURDIL_DIM_CAP";

/// Runs the tool with `args` (without the program name). Artifacts go to
/// `out` unless an --output path is given; diagnostics and summaries go to
/// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace schurdil::cli
