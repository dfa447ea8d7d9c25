#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "resilsim/metrics.hpp"

namespace resilsim {

/// Compact, byte-stable rendering: integral values print without a decimal
/// point, everything else with up to six decimals, trailing zeros trimmed.
std::string format_metric_number(double value);

/// Timeseries contract: header row first, one row per day, '.' decimal
/// separator, columns ordered by (entity id, metric name).
std::string timeseries_csv(const RunMetrics& metrics);

/// End-of-run aggregates, one row per run plus a "mean" row.
std::string summary_csv(std::span<const RunMetrics> runs,
                        const RunMetrics& mean);

/// Writes the rendered text; failures surface the path and cause.
void write_file(const std::filesystem::path& path, const std::string& content);

void write_timeseries(const RunMetrics& metrics,
                      const std::filesystem::path& path);

}  // namespace resilsim
