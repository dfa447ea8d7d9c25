#pragma once

#include "resilsim/world.hpp"

namespace resilsim::detail {

// Canonical enumeration order behind World::column_lut; the schema itself is
// sorted by (entity, metric).
inline constexpr const char* kPopulationMetrics[] = {
    "susceptible", "infected", "recovered", "new_infections", "deaths"};
inline constexpr const char* kServiceMetrics[] = {
    "occupancy", "capacity", "queue", "mean_wait",
    "utilization", "quality",  "admissions"};
inline constexpr const char* kNodeMetrics[] = {"quality", "attacks"};

void spawn_patient(World& world, std::uint16_t population_index,
                   std::uint16_t disease_index, HealthState state,
                   bool sir_tracked, int day);

void spawn_from_distribution(World& world, std::uint16_t population_index,
                             std::uint16_t disease_index,
                             const std::array<double, kIllStates>& severity,
                             bool sir_tracked, int day);

void sample_metrics(World& world);

void finalize_aggregates(World& world);

}  // namespace resilsim::detail
