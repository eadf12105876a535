#pragma once

#include <iosfwd>

namespace owf::cli {

/// Entry point behind the `owf` executable. Returns 0 on success, 2 on flag
/// errors and 1 on runtime failures; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace owf::cli
