// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace luroth::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDomain = 3, kResourceCap = 4 };

// Malformed command-line input that parsed syntactically (e.g. window 5:1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// args excludes the program name. Output goes to `out` unless --out is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace luroth::cli
