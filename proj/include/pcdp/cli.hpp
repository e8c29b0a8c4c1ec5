#pragma once

#include <ostream>

namespace pcdp::cli {

// pcdp-cli <knapsack|knapsack-fast|partition|ssl|necklace> <solve|replay> [flags]
// Exit codes: 0 ok, 2 bad input (flags, files, rejected operations), 3 infeasible.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace pcdp::cli
