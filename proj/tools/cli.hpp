#pragma once

#include <iosfwd>

namespace mawarith::cli {

/// Runs the command line. Returns 0 on success, 1 on a run failure and 2 on
/// a usage error. Normal output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mawarith::cli
