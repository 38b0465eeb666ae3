// cli.hpp — The effham command line: derive, simulate, oracle

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace effham::cli {

enum ExitCode : int {
    kOk = 0,
    kInputError = 1,
    kDegenerate = 2,
    kLeakage = 3,
    kStepGuard = 4,
    kLabelError = 5,
    kOracleMismatch = 6,
    kWindowTooShort = 7,
};

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace effham::cli
