#pragma once

#include <string>
#include <vector>

namespace ardtk::cli {

/// Runs one command line (without the program name). Returns the exit
/// code: 0 on success, 1 on domain errors, 2 on usage errors.
int run(const std::vector<std::string>& args);

}  // namespace ardtk::cli
