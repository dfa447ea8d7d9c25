#include "resilsim/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace resilsim {

std::string format_metric_number(double value) {
    if (!std::isfinite(value)) {
        return "nan";
    }
    const double rounded = std::round(value);
    if (std::fabs(value - rounded) < 1e-9 && std::fabs(value) < 9.0e15) {
        char buffer[32];
        std::snprintf(buffer, sizeof(buffer), "%lld",
                      static_cast<long long>(rounded));
        return buffer;
    }
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    // Trim trailing zeros, keep at least one decimal.
    std::size_t len = std::strlen(buffer);
    while (len > 1 && buffer[len - 1] == '0' && buffer[len - 2] != '.') {
        buffer[--len] = '\0';
    }
    return buffer;
}

std::string timeseries_csv(const RunMetrics& metrics) {
    std::ostringstream out;
    out << "day";
    for (const MetricColumn& column : metrics.schema->columns) {
        out << ',' << column.entity << '.' << column.metric;
    }
    out << '\n';
    for (int day = 0; day < metrics.rows(); ++day) {
        out << day;
        for (double value : metrics.row(day)) {
            out << ',' << format_metric_number(value);
        }
        out << '\n';
    }
    return out.str();
}

std::string summary_csv(std::span<const RunMetrics> runs,
                        const RunMetrics& mean) {
    std::ostringstream out;
    out << "run";
    for (const auto& [name, value] : mean.aggregates) {
        out << ',' << name;
    }
    out << '\n';
    for (std::size_t r = 0; r < runs.size(); ++r) {
        out << r;
        for (const auto& [name, value] : runs[r].aggregates) {
            out << ',' << format_metric_number(value);
        }
        out << '\n';
    }
    out << "mean";
    for (const auto& [name, value] : mean.aggregates) {
        out << ',' << format_metric_number(value);
    }
    out << '\n';
    return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw std::runtime_error("write to '" + path.string() + "' failed");
    }
}

void write_timeseries(const RunMetrics& metrics,
                      const std::filesystem::path& path) {
    write_file(path, timeseries_csv(metrics));
}

}  // namespace resilsim
