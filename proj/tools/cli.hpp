#pragma once

#include <iosfwd>

namespace pdcert::cli {

/// Exit codes: 0 success/converged, 1 bad input or error, 2 ran but did not
/// reach the tolerance (solve, compare) or failed verification (rates).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pdcert::cli
