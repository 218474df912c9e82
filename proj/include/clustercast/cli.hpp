#pragma once

#include <iosfwd>

namespace clustercast {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitIntegrity = 4,
};

/// Parses arguments, builds the effective configuration (flags over config
/// file over defaults), runs one subcommand and returns the exit status.
/// Results go to `out` (or to files under --out-dir); errors are reported on
/// `err` as a single line:
///   error kind=<config|numeric|integrity|internal> field=<key> message="..."
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace clustercast
