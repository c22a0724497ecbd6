#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lapgrowth {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// lapgrowth {simulate|verify|estimate|algebra|render} [options]
int cli_main(int argc, char** argv);
/// Same, with args excluding the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lapgrowth
