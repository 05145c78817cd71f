#pragma once

#include <string>
#include <vector>

namespace blocksdp::cli {

// Full command-line surface. Returns the process exit code: 0 on success
// (including flagged non-convergence), 2 on I/O or precondition errors.
int run(int argc, const char* const* argv);

// Same, for in-process use; args exclude the program name.
int run(const std::vector<std::string>& args);

}  // namespace blocksdp::cli
