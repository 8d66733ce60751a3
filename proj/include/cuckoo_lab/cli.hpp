#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cuckoo_lab::cli {

// Runs one command line (without the program name). Returns 0 on success,
// 2 on argument errors and 1 on runtime errors; results go to `out`,
// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cuckoo_lab::cli
