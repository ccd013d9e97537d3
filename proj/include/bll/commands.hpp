#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bll {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitSolver = 3,
    kExitVerify = 4,
};

/// Entry point of the `bll` tool. args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bll
