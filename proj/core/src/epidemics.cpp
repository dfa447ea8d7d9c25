#include "resilsim/epidemics.hpp"

#include <algorithm>
#include <stdexcept>

namespace resilsim {

long long poisson_capped(double mean, long long cap, RngStream& rng) {
    if (cap <= 0 || !(mean > 0.0)) {
        return 0;
    }
    return std::min(rng.poisson(mean), cap);
}

SirStepResult sir_step(long long susceptible, long long infected,
                       long long recovered, const SirParams& params,
                       RngStream& rng) {
    if (susceptible < 0 || infected < 0 || recovered < 0) {
        throw std::invalid_argument("sir_step: negative compartment");
    }
    const long long total = susceptible + infected + recovered;
    if (total <= 0) {
        throw std::invalid_argument("sir_step: empty population");
    }
    const double infection_mean = params.beta * static_cast<double>(susceptible) *
                                  static_cast<double>(infected) /
                                  static_cast<double>(total);
    const long long infections = poisson_capped(infection_mean, susceptible, rng);
    const double recovery_mean = params.gamma * static_cast<double>(infected);
    const long long recoveries = poisson_capped(recovery_mean, infected, rng);
    return SirStepResult{
        susceptible - infections,
        infected + infections - recoveries,
        recovered + recoveries,
        infections,
    };
}

long long baseline_demand(long long population_size, double incidence_per_100k,
                          RngStream& rng) {
    if (incidence_per_100k < 0.0) {
        throw std::invalid_argument("baseline_demand: negative incidence");
    }
    const double mean =
        static_cast<double>(population_size) * incidence_per_100k / 100000.0;
    return mean > 0.0 ? rng.poisson(mean) : 0;
}

std::vector<MciArrival> mci_surge(const Population& pop, int day,
                                  RngStream& rng) {
    std::vector<MciArrival> arrivals;
    for (const MciEvent& event : pop.mci_events) {
        if (event.start_day != day || event.casualty_count <= 0) {
            continue;
        }
        std::array<long long, kIllStates> counts{};
        for (long long i = 0; i < event.casualty_count; ++i) {
            ++counts[rng.categorical(event.severity)];
        }
        for (int s = 0; s < kIllStates; ++s) {
            if (counts[s] > 0) {
                arrivals.push_back(MciArrival{event.disease, ill_state(s), counts[s]});
            }
        }
    }
    return arrivals;
}

std::size_t route_new_patient(const Population& pop, RngStream& rng) {
    if (pop.routing.empty()) {
        throw std::logic_error("route_new_patient: population has no routing");
    }
    return rng.categorical(pop.routing);
}

}  // namespace resilsim
