#pragma once

#include <iosfwd>

namespace ddr {

/// Entry point of the `ddr` command line tool. Returns 0 on success, 1 when a
/// check fails, 2 on usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ddr
