#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace varmesh::cli {

/// Parses and runs one batch subcommand (args exclude the program name,
/// e.g. {"check", "--n", "33", "--out", "run1"}). Progress and summary
/// lines go to `out`, diagnostics to `err`; files land under --out, whose
/// directory is created fresh (reusing an existing one requires --force).
///
/// Exit codes: 0 success, 2 input error, 3 solver failure, 4 invalid
/// target.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Same, wired to std::cout / std::cerr for main().
int run(std::vector<std::string> args);

}  // namespace varmesh::cli
