#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "fbr/config.hpp"
#include "fbr/report.hpp"

namespace fbr {

enum ExitCode : int { kExitOk = 0, kExitChecksFailed = 1, kExitInput = 2, kExitRuntime = 3 };

struct RunResult {
    int exit_code = kExitOk;
    VerificationReport report;
    Json timings = Json::object();       // seconds per stage; kept out of the report
    std::vector<std::string> artifacts;  // files written
};

/// Runs one operation and writes report.json, timings.json and any mesh into the output
/// directory. Check failures are reported, not thrown; input errors propagate.
RunResult execute(const RunConfig& config, std::ostream& log);

/// execute() with errors mapped to exit codes and messages on stderr.
int run(const RunConfig& config);

/// Report text without the timestamp line, for byte comparisons.
std::string strip_timestamp(const std::string& report_text);

}  // namespace fbr
