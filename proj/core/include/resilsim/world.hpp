#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "resilsim/cyber.hpp"
#include "resilsim/disease.hpp"
#include "resilsim/epidemics.hpp"
#include "resilsim/healthcare.hpp"
#include "resilsim/metrics.hpp"
#include "resilsim/scenario.hpp"

namespace resilsim {

struct SimClock {
    int step = 0;
    int horizon = 0;
    bool operator==(const SimClock&) const = default;
};

/// Complete simulation state of one run. Plain value type: copyable,
/// comparable and transferable between threads.
struct World {
    std::uint64_t master_seed = 0;
    std::uint32_t run_index = 0;
    SimClock clock;
    QualityParams quality;
    CyberParams cyber;

    std::vector<DiseaseSpec> diseases;
    std::vector<Population> populations;
    std::vector<Hospital> hospitals;
    std::vector<ItNode> it_nodes;
    std::vector<Attacker> attackers;
    std::vector<std::uint16_t> topo_order;         // topological node order
    std::vector<std::vector<std::uint16_t>> node_neighbors;  // undirected
    std::vector<std::vector<double>> mixing;       // empty: identity

    std::vector<Patient> patients;          // id == index, never reordered
    std::vector<std::uint32_t> active;      // ill patients, ascending id

    // Today's tallies, reset at the start of every step.
    std::vector<long long> new_infections_today;
    std::vector<long long> deaths_today;

    std::shared_ptr<const MetricsSchema> schema;
    std::vector<std::size_t> column_lut;  // enumeration order -> schema column
    RunMetrics metrics;

    bool operator==(const World&) const = default;
};

/// Builds the initial world from a validated scenario: agents sorted by id
/// (declaration order never affects results), initial infections spawned,
/// day-0 metrics row sampled.
World build_world(const ScenarioConfig& config, std::uint64_t master_seed,
                  std::uint32_t run_index);

}  // namespace resilsim
