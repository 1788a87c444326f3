#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gstein::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_input = 2,
  exit_support = 3,
  exit_mismatch = 4,
  exit_oracle = 5,
};

/// Runs one command line. args[0] is the program name. GAUSS_STEIN_TOL is read
/// from the environment unless `tol_env` is given explicitly.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const std::string* tol_env);

}  // namespace gstein::cli
