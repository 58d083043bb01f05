#pragma once

#include <string>
#include <vector>

namespace topomap {

/// CLI entry point (subcommands: analyze, compare, render, bench).
/// Exit codes: 0 success, 2 unreadable input, 3 pipeline invariant
/// violation, 1 other failures.
int run_cli(const std::vector<std::string>& args);

}  // namespace topomap
