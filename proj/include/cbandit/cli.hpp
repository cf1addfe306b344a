#pragma once

#include <iosfwd>

namespace cbandit {

// Exit codes: 0 success, 2 configuration or usage error, 3 runtime error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cbandit
