#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pertfool/metrics.hpp"

namespace pertfool::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportVersion = 1;

/// Entry point shared by the executable and the tests. Subcommands:
/// gen-data, train, attack, sweep, report, opnorm-attack.
/// Returns 0 on success, 1 on a runtime error and 2 on a usage error; errors
/// are reported on `err` as one line "error code=<CODE> message=<text>".
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Sweep CSV: '#' comment lines carrying the configuration, then the header
/// "method,eps,fooling_ratio,mean_iterations,samples" and one row per cell.
std::string format_sweep_csv(const std::vector<SweepRecord>& records,
                             const std::string& config_json);

}  // namespace pertfool::cli
