#ifndef CADKIT_TOOLS_CLI_HPP
#define CADKIT_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cadkit::cli
{

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_data = 3;
inline constexpr int exit_backend = 4;

// args excludes the program name. "-" or an absent --in reads `in`; an absent
// --out writes `out`. Diagnostics go to `err`.
int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err);

} // namespace cadkit::cli

#endif
