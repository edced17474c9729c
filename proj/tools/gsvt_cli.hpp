#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace gsvt::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kData = 3,
  kNumerical = 4,
};

/// Runs one `gsvt` invocation. `args` excludes the program name. Results go
/// to `out` as JSON; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace gsvt::cli
