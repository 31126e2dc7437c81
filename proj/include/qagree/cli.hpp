#ifndef QAGREE_CLI_HPP
#define QAGREE_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace qagree::cli {

enum ExitCode : int {
  kSuccess = 0,
  kDomainError = 1,    // incompatible states, non-Hermitian pooling, ...
  kMalformedInput = 2,
};

// Runs one subcommand. Results (and error JSON) go to --output, which
// defaults to `out`; usage text goes to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qagree::cli

#endif  // QAGREE_CLI_HPP
