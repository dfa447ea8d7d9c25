#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "resilsim/disease.hpp"
#include "resilsim/scenario.hpp"

namespace testsupport {

inline std::string fixture_path(const std::string& name) {
    return std::string(RESILSIM_FIXTURE_DIR) + "/" + name;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Pearson chi-square statistic against equiprobable bins.
inline double chi_square_uniform(const std::vector<double>& samples, int bins) {
    std::vector<long long> observed(bins, 0);
    for (double u : samples) {
        int bin = static_cast<int>(u * bins);
        if (bin >= bins) {
            bin = bins - 1;
        }
        ++observed[bin];
    }
    const double expected = static_cast<double>(samples.size()) / bins;
    double stat = 0.0;
    for (long long count : observed) {
        const double diff = count - expected;
        stat += diff * diff / expected;
    }
    return stat;
}

/// Eventual absorption-into-death probabilities of a ladder chain with
/// transient states 0..n-1, solved by Gaussian elimination on
/// (I - Q) x = r. Independent of the simulator's sampling path.
inline std::vector<double> absorbing_death_probabilities(
    const std::vector<resilsim::TransitionProbs>& rows) {
    const std::size_t n = rows.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = 1.0 - rows[i].stay;
        if (i + 1 < n) {
            a[i][i + 1] = -rows[i].worsening;  // worsening moves down the ladder
        }
        a[i][n] = rows[i].death;
        if (i + 1 == n) {
            a[i][n] += rows[i].worsening;  // last rung worsens into death
        }
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row) {
            if (std::fabs(a[row][col]) > std::fabs(a[pivot][col])) {
                pivot = row;
            }
        }
        std::swap(a[col], a[pivot]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0.0) {
                continue;
            }
            const double factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k <= n; ++k) {
                a[row][k] -= factor * a[col][k];
            }
        }
    }
    std::vector<double> solution(n);
    for (std::size_t i = 0; i < n; ++i) {
        solution[i] = a[i][n] / a[i][i];
    }
    return solution;
}

/// Moving-average smoothing followed by a single-peak shape check: the
/// series must rise (net of a deadband) to its maximum and only fall after.
inline bool is_unimodal(const std::vector<double>& series, int smooth_window,
                        double deadband_fraction) {
    std::vector<double> smooth;
    const int n = static_cast<int>(series.size());
    for (int i = 0; i < n; ++i) {
        const int from = std::max(0, i - smooth_window / 2);
        const int to = std::min(n - 1, i + smooth_window / 2);
        double sum = 0.0;
        for (int k = from; k <= to; ++k) {
            sum += series[k];
        }
        smooth.push_back(sum / (to - from + 1));
    }
    double peak = 0.0;
    for (double v : smooth) {
        peak = std::max(peak, v);
    }
    const double deadband = peak * deadband_fraction;
    bool falling = false;
    double reference = smooth.front();
    for (double v : smooth) {
        if (!falling) {
            if (v > reference) {
                reference = v;
            } else if (reference - v > deadband) {
                falling = true;
                reference = v;
            }
        } else {
            if (v < reference) {
                reference = v;
            } else if (v - reference > deadband) {
                return false;  // a second rise
            }
        }
    }
    return true;
}

/// Minimal programmatic scenario: one population, no hospitals or IT nodes,
/// one disease with uniform tables.
inline resilsim::ScenarioConfig tiny_scenario(int horizon, long long size,
                                              long long initial_infected,
                                              double beta, double gamma) {
    resilsim::ScenarioConfig cfg;
    cfg.horizon_days = horizon;
    resilsim::DiseaseConfig disease;
    disease.id = "toy";
    disease.sir = {beta, gamma};
    for (int s = 0; s < resilsim::kIllStates; ++s) {
        const auto state = resilsim::ill_state(s);
        for (int c = 0; c <= static_cast<int>(resilsim::required_care(state)); ++c) {
            disease.states[state][static_cast<resilsim::CareLevel>(c)] =
                resilsim::DiseaseCellConfig{5.0, 100.0, 0.0, 0.0};
        }
    }
    cfg.diseases.push_back(disease);
    resilsim::PopulationConfig pop;
    pop.id = "p";
    pop.size = size;
    pop.baseline_severity[resilsim::HealthState::moderate] = 1.0;
    pop.diseases.push_back({"toy", initial_infected, 0});
    cfg.populations.push_back(pop);
    return cfg;
}

}  // namespace testsupport
