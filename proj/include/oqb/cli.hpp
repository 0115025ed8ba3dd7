#pragma once

#include <iosfwd>

namespace oqb {

/// Entry point of the oqb command-line tool.
/// Exit codes: 0 pass, 1 verification violations or exhausted budget,
/// 2 usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace oqb
