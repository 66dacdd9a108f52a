#pragma once

#include <string>
#include <vector>

namespace bohmlab {

// Exit codes: 0 success, 2 usage or input error, 3 numerical failure,
// 4 verification failure. Exhaustive and disjoint; every library exception
// is mapped here and nowhere else.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

} // namespace bohmlab
