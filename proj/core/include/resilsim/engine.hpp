#pragma once

#include <functional>

#include "resilsim/world.hpp"

namespace resilsim {

/// Advances the world by one day. Agent phases run in a fixed order --
/// (1) cyber layer, (2) demand generation, (3) allocation and referral,
/// (4) disease progression, (5) metric sampling -- which is part of the
/// determinism contract: a same-day attack already affects same-day care.
void step(World& world);

// Individual phases, exposed so tests can interleave their own checks.
void phase_cyber(World& world);
void phase_demand(World& world);
void phase_allocation(World& world);
void phase_progression(World& world);
void phase_metrics(World& world);

/// Runs one full simulation of the scenario. Pure function of
/// (scenario, master_seed, run_index): identical inputs produce identical
/// metrics, bit for bit.
RunMetrics run_simulation(const ScenarioConfig& scenario,
                          std::uint64_t master_seed, std::uint32_t run_index);

struct MonteCarloResult {
    std::vector<RunMetrics> runs;
    MeanMetrics mean;
};

/// Runs `n_runs` mutually independent realizations (run indices 0..n-1) and
/// their per-step arithmetic mean. `max_threads` caps the worker count
/// (0: hardware concurrency); results do not depend on it.
MonteCarloResult run_montecarlo(const ScenarioConfig& scenario, int n_runs,
                                std::uint64_t master_seed, int max_threads = 0);

/// Runs fn(0..count-1) on a small worker pool; used for Monte Carlo batches
/// and scenario grids. Work items must be independent.
void parallel_for(std::size_t count, int max_threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace resilsim
