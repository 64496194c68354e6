#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pivotlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerification = 2;

// args excludes the program name. Reports go to out, logs and errors to err.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pivotlab::cli
