#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>

#include "dlms/error.hpp"
#include "dlms/metrics.hpp"

namespace dlms::cli {

/// Shortest decimal text that reads back to exactly `v`.
std::string format_real(double v);

/// Trajectory CSV: run,iteration,agent,w0..wM-1,e,dist_opt. One row per
/// (run, iteration, agent), sorted by run, iteration, then agent id. The e
/// cell is empty for averaging agents.
void write_trajectory_csv(std::ostream& out, std::span<const RunRecord> records);

/// Long-format metrics CSV: metric,run,agent,peer,iteration,value.
/// Absent values (no convergence, no crossing) leave `value` empty.
void write_metrics_csv(std::ostream& out, const MetricsReport& report, double band,
                       double window_fraction);

/// run,agent,iteration,message for every diverged run.
void write_error_manifest(std::ostream& out, std::span<const DivergenceError> failures);

/// t1.csv -> t1.metrics.csv, t1.csv -> t1.errors.csv.
std::filesystem::path sibling_path(const std::filesystem::path& out, const std::string& tag);

}  // namespace dlms::cli
