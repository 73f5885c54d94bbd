#pragma once

#include <ostream>

#include "cli/config.hpp"
#include "cli/table.hpp"

namespace cyclewalk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct CommandResult {
  Table table;
  int status = kExitOk;
};

// Each command validates its config (throwing UsageError), writes
// diagnostics to `diag`, and returns the table to emit.
CommandResult cmd_evolve(const RunConfig& cfg, std::ostream& diag);
CommandResult cmd_limiting(const RunConfig& cfg, std::ostream& diag);
CommandResult cmd_sweep(const RunConfig& cfg, std::ostream& diag);
CommandResult cmd_mixing(const RunConfig& cfg, std::ostream& diag);
CommandResult cmd_verify(const RunConfig& cfg, std::ostream& diag);
CommandResult cmd_residue(const RunConfig& cfg, std::ostream& diag);

/// Full command-line entry point. Tables go to `out` (or --out), everything
/// else to `err`. Returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cyclewalk::cli
