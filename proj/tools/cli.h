#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace zipfsketch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitGuard = 3;

/// Runs the command line `args` (args[0] is the program name). Results go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1000,2000" or "1000:5000:200" (inclusive range).
std::vector<std::size_t> parse_budgets(const std::string& text);

std::vector<double> parse_number_list(const std::string& text);

}  // namespace zipfsketch::cli
