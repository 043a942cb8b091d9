#pragma once

#include <iosfwd>

namespace sonarnav {

/// Entry point of the `sonarnav` command line tool. Exit codes: 0 success,
/// 1 runs failed (collision, stuck, timeout or missed goal), 2 usage or scenario errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sonarnav
