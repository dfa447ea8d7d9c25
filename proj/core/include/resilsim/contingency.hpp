#pragma once

#include <map>
#include <string>
#include <vector>

#include "resilsim/metrics.hpp"

namespace resilsim {

enum class MeritKind { deaths, peak_utilization };

MeritKind merit_kind_from_token(std::string_view token);  // "deaths"/"utilization"

/// Merit of one cell's Monte Carlo mean: the accumulated deaths across
/// populations, or the maximum utilization rate over services and days.
/// Lower is better for both.
double merit_value(const MeanMetrics& mean, MeritKind kind);

/// Risk-scenario x countermeasure table of a merit function, with per-row
/// competition ranks (1 = best; equal cells share a rank).
struct ContingencyMatrix {
    MeritKind merit = MeritKind::deaths;
    std::vector<std::string> risks;     // row labels
    std::vector<std::string> measures;  // column labels, "baseline" first
    std::vector<double> values;         // rows x measures, row-major
    std::vector<int> ranks;

    double value(std::size_t row, std::size_t column) const {
        return values[row * measures.size() + column];
    }
    int rank(std::size_t row, std::size_t column) const {
        return ranks[row * measures.size() + column];
    }
};

/// Builds the matrix from a complete grid of cell means; a missing
/// (risk, measure) combination is an error, never an empty cell.
ContingencyMatrix build_contingency_matrix(
    const std::vector<std::string>& risks,
    const std::vector<std::string>& measures,
    const std::map<std::pair<std::string, std::string>, MeanMetrics>& grid,
    MeritKind kind);

std::string contingency_csv(const ContingencyMatrix& matrix);
std::string contingency_text(const ContingencyMatrix& matrix);

}  // namespace resilsim
