#pragma once

#include <iosfwd>
#include <string>

namespace arp::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,  // bad arguments, invalid config, malformed trace
  kExitIterationLimit = 2,
  kExitSubsolverFailure = 3,
  kExitInvariantFailure = 4,
};

int cmd_solve(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_sweep(const std::string& config_path, int jobs, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& trace_path, std::ostream& out, std::ostream& err);
int cmd_list_problems(bool json, std::ostream& out);

/// Full command-line entry point; main() is a thin wrapper around this.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace arp::cli
