// The cl2 command line: decide, prove, check, play, verify, refute, lemmas and
// serve.

#ifndef CL2_CLI_HPP_
#define CL2_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace cl2 {

enum ExitCode : int {
  kExitOk = 0,
  kExitNegative = 1,   // unprovable, refuted, or an invalid proof
  kExitUsage = 2,      // bad flags, unreadable input, parse errors
  kExitInvariant = 3,  // a strategy or property invariant failed
};

// CL2_SEED when set to a decimal number, otherwise 0.
std::uint64_t default_seed();

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace cl2

#endif  // CL2_CLI_HPP_
