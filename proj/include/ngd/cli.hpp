#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ngd::cli {

// Exit codes: 0 checked and clean, 2 checked and violated, 1 could not check.
constexpr int kClean = 0;
constexpr int kFailure = 1;
constexpr int kViolation = 2;

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ngd::cli
