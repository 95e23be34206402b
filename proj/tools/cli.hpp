#pragma once

#include <string>
#include <vector>

namespace ehcr::cli {

/// Runs one CLI invocation (argv without the program name).
/// Returns 0 on success, 1 on runtime failure, 2 on usage errors.
int dispatch(const std::vector<std::string>& args);

}  // namespace ehcr::cli
