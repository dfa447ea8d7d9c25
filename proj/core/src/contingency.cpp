#include "resilsim/contingency.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "resilsim/csv.hpp"

namespace resilsim {

MeritKind merit_kind_from_token(std::string_view token) {
    if (token == "deaths") {
        return MeritKind::deaths;
    }
    if (token == "utilization") {
        return MeritKind::peak_utilization;
    }
    throw std::invalid_argument("unknown merit '" + std::string(token) +
                                "' (expected deaths or utilization)");
}

double merit_value(const MeanMetrics& mean, MeritKind kind) {
    double result = 0.0;
    for (std::size_t c = 0; c < mean.schema->size(); ++c) {
        const MetricColumn& column = mean.schema->columns[c];
        if (kind == MeritKind::deaths) {
            if (column.metric != "deaths" || column.entity.rfind("pop.", 0) != 0) {
                continue;
            }
            for (int day = 0; day < mean.rows(); ++day) {
                result += mean.at(day, c);
            }
        } else {
            if (column.metric != "utilization") {
                continue;
            }
            for (int day = 0; day < mean.rows(); ++day) {
                result = std::max(result, mean.at(day, c));
            }
        }
    }
    return result;
}

ContingencyMatrix build_contingency_matrix(
    const std::vector<std::string>& risks,
    const std::vector<std::string>& measures,
    const std::map<std::pair<std::string, std::string>, MeanMetrics>& grid,
    MeritKind kind) {
    ContingencyMatrix matrix;
    matrix.merit = kind;
    matrix.risks = risks;
    matrix.measures = measures;
    matrix.values.reserve(risks.size() * measures.size());
    for (const std::string& risk : risks) {
        for (const std::string& measure : measures) {
            const auto it = grid.find({risk, measure});
            if (it == grid.end()) {
                throw std::invalid_argument("incomplete grid: missing cell (" +
                                            risk + ", " + measure + ")");
            }
            matrix.values.push_back(merit_value(it->second, kind));
        }
    }
    matrix.ranks.resize(matrix.values.size());
    const std::size_t columns = measures.size();
    for (std::size_t row = 0; row < risks.size(); ++row) {
        for (std::size_t col = 0; col < columns; ++col) {
            int better = 0;
            for (std::size_t other = 0; other < columns; ++other) {
                if (matrix.value(row, other) < matrix.value(row, col)) {
                    ++better;
                }
            }
            matrix.ranks[row * columns + col] = better + 1;
        }
    }
    return matrix;
}

std::string contingency_csv(const ContingencyMatrix& matrix) {
    std::ostringstream out;
    out << "risk_scenario";
    for (const std::string& measure : matrix.measures) {
        out << ',' << measure;
    }
    for (const std::string& measure : matrix.measures) {
        out << ',' << measure << "_rank";
    }
    out << '\n';
    for (std::size_t row = 0; row < matrix.risks.size(); ++row) {
        out << matrix.risks[row];
        for (std::size_t col = 0; col < matrix.measures.size(); ++col) {
            out << ',' << format_metric_number(matrix.value(row, col));
        }
        for (std::size_t col = 0; col < matrix.measures.size(); ++col) {
            out << ',' << matrix.rank(row, col);
        }
        out << '\n';
    }
    return out.str();
}

std::string contingency_text(const ContingencyMatrix& matrix) {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header = {"risk_scenario"};
    header.insert(header.end(), matrix.measures.begin(), matrix.measures.end());
    cells.push_back(header);
    for (std::size_t row = 0; row < matrix.risks.size(); ++row) {
        std::vector<std::string> line = {matrix.risks[row]};
        for (std::size_t col = 0; col < matrix.measures.size(); ++col) {
            line.push_back(format_metric_number(matrix.value(row, col)) + " (" +
                           std::to_string(matrix.rank(row, col)) + ")");
        }
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> widths(cells.front().size(), 0);
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            widths[c] = std::max(widths[c], line[c].size());
        }
    }
    std::ostringstream out;
    out << "merit: "
        << (matrix.merit == MeritKind::deaths ? "accumulated deaths"
                                              : "peak utilization rate")
        << "; rank 1 is the best column of each row\n";
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            out << (c == 0 ? "" : "  ") << std::setw(static_cast<int>(widths[c]))
                << std::left << line[c];
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace resilsim
