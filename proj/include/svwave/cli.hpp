#ifndef SVWAVE_CLI_HPP
#define SVWAVE_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace svwave {

/// Command-line entry point, stream-injected for testability.
/// args excludes the program name. Subcommands:
///   run --config FILE [--steps N] [--out DIR] [--seed S] [--workers W]
///   check-potential --config FILE
///   dispersion --config FILE --mode k1,k2,...
/// Returns 0 on success, 1 on numerical failure, 2 on usage/config errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace svwave

#endif
