#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "resilsim/health.hpp"
#include "resilsim/rng.hpp"

namespace resilsim {

/// Per-day contagion rates of an SIR process.
struct SirParams {
    double beta = 0.0;   // new infections per infected person per day
    double gamma = 0.0;  // recoveries per infected person per day
    bool operator==(const SirParams&) const = default;
};

struct SirStepResult {
    long long susceptible = 0;
    long long infected = 0;
    long long recovered = 0;
    long long new_infections = 0;
    bool operator==(const SirStepResult&) const = default;
};

/// Poisson draw truncated at cap (keeps agent counts non-negative).
long long poisson_capped(double mean, long long cap, RngStream& rng);

/// One day of a stochastic SIR process: infections drawn Poisson with mean
/// beta*S*I/N capped at S, recoveries Poisson with mean gamma*I capped at I.
/// S+I+R is conserved.
SirStepResult sir_step(long long susceptible, long long infected,
                       long long recovered, const SirParams& params,
                       RngStream& rng);

/// Daily count of background demand: Poisson with mean
/// size * incidence / 100000.
long long baseline_demand(long long population_size, double incidence_per_100k,
                          RngStream& rng);

/// SIR bookkeeping of one population for one disease. Infected agents leave
/// the compartment when their illness resolves: recovery moves them to the
/// recovered compartment, death into the deaths counter, so
/// susceptible + infected + recovered + deaths stays constant.
struct SirCompartments {
    std::uint16_t disease = 0;
    long long susceptible = 0;
    long long infected = 0;
    long long recovered = 0;
    long long deaths = 0;

    long long alive() const { return susceptible + infected + recovered; }
    bool operator==(const SirCompartments&) const = default;
};

/// Scheduled mass-casualty incident.
struct MciEvent {
    int start_day = 0;
    long long casualty_count = 0;
    std::array<double, kIllStates> severity{};  // distribution over ill states
    std::uint16_t disease = 0;
    bool operator==(const MciEvent&) const = default;
};

/// Community of potential patients. Demand comes from three superposed
/// processes: baseline incidence, SIR contagion and mass-casualty incidents.
struct Population {
    std::string id;
    long long size = 0;
    double baseline_incidence_per_100k = 0.0;
    std::uint16_t baseline_disease = 0;
    std::array<double, kIllStates> baseline_severity{};  // entry states of baseline demand
    std::vector<SirCompartments> compartments;
    std::vector<double> routing;  // over hospitals (sorted by id); sums to 1
    std::vector<MciEvent> mci_events;
    bool operator==(const Population&) const = default;
};

struct MciArrival {
    std::uint16_t disease = 0;
    HealthState state = HealthState::moderate;
    long long count = 0;
    bool operator==(const MciArrival&) const = default;
};

/// Casualties of every incident scheduled for `day`, with severities drawn
/// from the event's distribution. Empty when nothing is scheduled.
std::vector<MciArrival> mci_surge(const Population& pop, int day,
                                  RngStream& rng);

/// Hospital index drawn from the population's routing distribution.
std::size_t route_new_patient(const Population& pop, RngStream& rng);

}  // namespace resilsim
