#pragma once

namespace distreg {

// Entry point of the distreg command line tool. Exit codes: 0 success,
// 2 usage error, 3 data error (unreadable/invalid files, shape mismatches),
// 4 internal invariant violation.
int cli_main(int argc, const char* const* argv);

}  // namespace distreg
