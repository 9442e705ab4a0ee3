#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace volnet::cli {

/// Entry point of the `volnet` tool. Returns 0 on success, 2 on a usage
/// error and 1 on a data or model error, which is reported on `err` as one
/// line `error: <Code>: <message>`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace volnet::cli
