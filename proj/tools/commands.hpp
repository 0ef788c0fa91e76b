#pragma once

#include <string>
#include <vector>

namespace bmerge::cli {

// Result of one command-line invocation. Exit codes: 0 when a verdict was
// computed (including negative verdicts), 1 on internal errors, 2 on usage
// and validation errors.
struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

// Runs the tool on `args` (without the program name).
Outcome run(const std::vector<std::string>& args);

}  // namespace bmerge::cli
