#pragma once

#include "chor/harness.hpp"
#include "chor/refine.hpp"
#include "chor/typing.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace chor::cli {

enum ExitCode : int { kPassed = 0, kFailed = 1, kUsage = 2 };

/// Runs one chorc invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// JSON {"pi": [...], "first": [...], "last": [...]}, sorted, 2-space indent.
std::string type_json(const ChorType& t);
std::string sweep_json(const SweepReport& r);
std::string refine_json(const RefineOutcome& outcome);
std::string refreport_json(const RefReport& r);

/// Parses {"tag": {"pi": [...], "first": [...], "last": [...]}, ...}.
/// Throws std::invalid_argument on malformed input.
ContextMap parse_context_map(std::string_view text);

}  // namespace chor::cli
