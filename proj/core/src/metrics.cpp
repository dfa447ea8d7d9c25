#include "resilsim/metrics.hpp"

#include <stdexcept>

namespace resilsim {

std::size_t MetricsSchema::find(std::string_view entity,
                                std::string_view metric) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].entity == entity && columns[i].metric == metric) {
            return i;
        }
    }
    return npos;
}

double RunMetrics::aggregate(std::string_view name) const {
    for (const auto& [key, value] : aggregates) {
        if (key == name) {
            return value;
        }
    }
    throw std::out_of_range("no aggregate named '" + std::string(name) + "'");
}

bool operator==(const RunMetrics& a, const RunMetrics& b) {
    const bool same_schema =
        a.schema == b.schema ||
        (a.schema && b.schema && a.schema->columns == b.schema->columns);
    return same_schema && a.horizon == b.horizon && a.data == b.data &&
           a.aggregates == b.aggregates;
}

MeanMetrics mean_of(std::span<const RunMetrics> runs) {
    if (runs.empty()) {
        throw std::invalid_argument("mean_of: empty batch");
    }
    MeanMetrics mean = runs.front();
    for (std::size_t r = 1; r < runs.size(); ++r) {
        const RunMetrics& run = runs[r];
        if (run.data.size() != mean.data.size() ||
            run.aggregates.size() != mean.aggregates.size()) {
            throw std::invalid_argument("mean_of: runs disagree on layout");
        }
        for (std::size_t i = 0; i < mean.data.size(); ++i) {
            mean.data[i] += run.data[i];
        }
        for (std::size_t i = 0; i < mean.aggregates.size(); ++i) {
            if (mean.aggregates[i].first != run.aggregates[i].first) {
                throw std::invalid_argument("mean_of: runs disagree on aggregates");
            }
            mean.aggregates[i].second += run.aggregates[i].second;
        }
    }
    const double inv = 1.0 / static_cast<double>(runs.size());
    for (double& cell : mean.data) {
        cell *= inv;
    }
    for (auto& [name, value] : mean.aggregates) {
        value *= inv;
    }
    return mean;
}

}  // namespace resilsim
