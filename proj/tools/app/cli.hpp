#pragma once

#include <iosfwd>

namespace fds::app {

// Entry point of the fdslab command line. Returns the process exit code:
// 0 success, 2 configuration or domain error, 3 numerical failure,
// 4 verification failure, 1 anything else.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fds::app
