#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace aoi::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

using Record = nlohmann::ordered_json;

/// Runs the command line `args` (without the program name). Results go to `out`
/// unless --out / --out-dir redirect them; diagnostics go to `err`.
/// Returns the process exit code: 0 on success, 1 when a computation failed,
/// 2 for invalid parameters.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// %.17g, with inf/nan spelled out.
std::string format_double(double x);

/// One header line of snake_case keys (taken from the first record), then one line per record.
std::string to_csv(const std::vector<Record>& rows);

}  // namespace aoi::cli
