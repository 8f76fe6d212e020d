// runner.hpp: command-line entry point for the comb-hom tool.
#pragma once

namespace combhom {
namespace cli {

// Parses argv and executes. Returns the process exit code: 0 on success,
// 2 for usage or configuration errors, 3 when a numerical consistency
// check fails, 1 for anything unexpected.
int run_main(int argc, const char* const* argv);

} // namespace cli
} // namespace combhom
