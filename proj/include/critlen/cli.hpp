#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace critlen {

enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitUsage = 2,
    kExitNumerical = 3,
};

/// Runs the command line `args` (without the program name). Results go to
/// `out`, diagnostics and usage text to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a:b" with decimal literals and a <= b.
std::pair<double, double> parse_range(const std::string& text);
/// Decimal literal such as "-1.5e3"; rejects hex, inf, nan and trailing text.
double parse_decimal(const std::string& text, const std::string& what);
int parse_integer(const std::string& text, const std::string& what);

} // namespace critlen
