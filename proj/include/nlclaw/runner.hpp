#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "nlclaw/diagnostics.hpp"
#include "nlclaw/scenario.hpp"

namespace nlclaw {

enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitCheckFailure = 2 };

enum class Command { Run, Sweep, Euler, Verify };

struct RunOptions {
  Command command = Command::Run;
  std::size_t threads = 0; ///< 0: thread_budget()
  /// Stored states per trajectory when the scenario gives no stride.
  std::size_t max_snapshots = 51;
};

/// Result files are kept in memory (file name -> content) until written, so a
/// run that throws leaves nothing behind.
struct RunOutcome {
  int exit_code = kExitOk;
  DiagnosticsReport report;
  std::map<std::string, std::string> files;
  std::vector<std::string> summary; ///< human-readable lines for the terminal
};

/// Executes the scenario. Throws nlclaw::Error (an input problem, exit 1)
/// when the scenario cannot be run as given, e.g. sweep with one epsilon.
RunOutcome run_scenario(const ScenarioSpec& spec, const RunOptions& opt = {});

/// Writes outcome.files into dir (created when missing) in name order.
void write_outcome(const RunOutcome& outcome, const std::filesystem::path& dir);

/// "# nlclaw <version>" followed by one "# key=value" line per entry.
std::string header_lines(const std::vector<std::pair<std::string, std::string>>& fields);

/// Fixed formatting used by every result file (%.12g).
std::string fmt(double v);

std::string version_string();

} // namespace nlclaw
