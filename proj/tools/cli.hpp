#pragma once

#include <ostream>

namespace utpp::cli {

/// Entry point behind the `utpp` executable. Returns the process exit code;
/// diagnostics go to `err`, progress and summaries to `out`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace utpp::cli
