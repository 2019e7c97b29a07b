#pragma once

// Command-line front end: synth, analyze, bench and hrv subcommands.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pleader/hrv.hpp"

namespace pleader {

// Exit codes: 0 success, 1 user error (bad flags, bad input, failed run),
// 2 internal error. Errors are reported as one line "error: <kind>: <message>".
inline constexpr int kExitOk = 0;
inline constexpr int kExitUser = 1;
inline constexpr int kExitInternal = 2;

// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Comma-separated reals; "inf" is accepted.
std::vector<double> parse_number_list(const std::string& text);

// Analysis report of an HRV record plus the record summary and the raw and
// corrected C(1, j) overlay curves for p in {0.25, 0.5, 1}.
nlohmann::json hrv_report_to_json(const HrvResult& result);

}  // namespace pleader
