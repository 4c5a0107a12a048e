#ifndef RINGRES_CLI_HPP
#define RINGRES_CLI_HPP

namespace ringres::cli {

// Full command-line entry point.  Returns the process exit code:
// 0 success, 2 configuration error, 3 numeric failure.
int run(int argc, const char* const* argv);

}  // namespace ringres::cli

#endif  // RINGRES_CLI_HPP
