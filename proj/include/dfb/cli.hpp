#pragma once

// `dfbplan` command-line surface. Commands are exposed as functions so they
// can be driven in-process (tests) as well as from tools/dfbplan.cpp.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dfb/dfbsim.hpp"
#include "dfb/profile.hpp"
#include "dfb/report.hpp"

namespace dfb::cli {

/// Directory searched for bundled fixtures: $DFBPLAN_FIXTURES, else the
/// source-tree fixtures/ directory.
std::filesystem::path fixture_dir();

/// Resolve a user-supplied input path: as given, with `extension` appended,
/// then the same two names (and their basenames) under fixture_dir().
/// Falls back to the path as given so the load error names it.
std::filesystem::path resolve_input(std::string_view arg, std::string_view extension);

/// "a..b" (inclusive), "a,b,c" or "a".
std::vector<std::size_t> parse_k_range(std::string_view text);

/// Module used for prediction slopes when none is named: the owner of the
/// highest-ranked Middle class.
std::string default_slope_module(const ModelProfile& profile);

Report analyze_report(const ModelProfile& profile);

/// Entry point. args excludes the program name. Returns the process exit
/// status: 0 success, 1 runtime error, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace dfb::cli
