#pragma once

#include <ostream>

namespace hardy::cli {

/// Entry point shared by the executable and the tests.  Returns the
/// process exit status: 0 success, 1 configuration, 2 numerics, 3 a solve
/// that did not converge (outputs are still written).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hardy::cli
