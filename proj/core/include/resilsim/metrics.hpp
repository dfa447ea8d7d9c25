#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace resilsim {

struct MetricColumn {
    std::string entity;
    std::string metric;
    bool operator==(const MetricColumn&) const = default;
};

/// Fixed column layout of a run: every declared population, hospital service
/// and IT node gets its columns up front, ordered by (entity, metric).
struct MetricsSchema {
    std::vector<MetricColumn> columns;

    std::size_t size() const { return columns.size(); }
    /// Index of (entity, metric), or npos when absent.
    std::size_t find(std::string_view entity, std::string_view metric) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    bool operator==(const MetricsSchema&) const = default;
};

/// Output of one simulation run (or the per-cell mean of a Monte Carlo
/// batch): one row per day from day 0 to the horizon, plus end-of-run
/// aggregates keyed by name.
struct RunMetrics {
    std::shared_ptr<const MetricsSchema> schema;
    int horizon = 0;
    std::vector<double> data;  // (horizon + 1) rows, row-major
    std::vector<std::pair<std::string, double>> aggregates;  // sorted by name

    int rows() const { return horizon + 1; }
    double at(int day, std::size_t column) const {
        return data[static_cast<std::size_t>(day) * schema->size() + column];
    }
    double& at(int day, std::size_t column) {
        return data[static_cast<std::size_t>(day) * schema->size() + column];
    }
    std::span<const double> row(int day) const {
        return {data.data() + static_cast<std::size_t>(day) * schema->size(),
                schema->size()};
    }
    /// Aggregate by exact name; throws std::out_of_range when missing.
    double aggregate(std::string_view name) const;
};

bool operator==(const RunMetrics& a, const RunMetrics& b);

/// Per-cell arithmetic mean of a batch; aggregates are averaged by name.
/// All runs must share one schema layout.
using MeanMetrics = RunMetrics;
MeanMetrics mean_of(std::span<const RunMetrics> runs);

}  // namespace resilsim
