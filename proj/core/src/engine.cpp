#include "resilsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "engine_detail.hpp"

namespace resilsim {

namespace detail {

void spawn_patient(World& world, std::uint16_t population_index,
                   std::uint16_t disease_index, HealthState state,
                   bool sir_tracked, int day) {
    const auto id = static_cast<std::uint32_t>(world.patients.size());
    RngStream rng(world.master_seed, world.run_index,
                  stream_key(StreamDomain::patient_init, id), day);
    Patient patient;
    patient.id = id;
    patient.population = population_index;
    patient.disease = disease_index;
    patient.state = state;
    patient.sir_tracked = sir_tracked;
    patient.state_entry_day = day;
    const Population& pop = world.populations[population_index];
    patient.hospital =
        pop.routing.empty()
            ? kNoHospital
            : static_cast<std::uint16_t>(route_new_patient(pop, rng));
    world.patients.push_back(patient);
    world.active.push_back(id);
    seek_care(id, world.patients, world.hospitals, day);
}

void spawn_from_distribution(World& world, std::uint16_t population_index,
                             std::uint16_t disease_index,
                             const std::array<double, kIllStates>& severity,
                             bool sir_tracked, int day) {
    const auto id = static_cast<std::uint32_t>(world.patients.size());
    RngStream rng(world.master_seed, world.run_index,
                  stream_key(StreamDomain::patient_init, id), day);
    const HealthState state = ill_state(
        static_cast<int>(rng.categorical(std::span<const double>(severity))));
    Patient patient;
    patient.id = id;
    patient.population = population_index;
    patient.disease = disease_index;
    patient.state = state;
    patient.sir_tracked = sir_tracked;
    patient.state_entry_day = day;
    const Population& pop = world.populations[population_index];
    patient.hospital =
        pop.routing.empty()
            ? kNoHospital
            : static_cast<std::uint16_t>(route_new_patient(pop, rng));
    world.patients.push_back(patient);
    world.active.push_back(id);
    seek_care(id, world.patients, world.hospitals, day);
}

void sample_metrics(World& world) {
    const int day = world.clock.step;
    RunMetrics& metrics = world.metrics;
    const std::size_t columns = world.schema->size();
    assert(metrics.data.size() == static_cast<std::size_t>(day) * columns);
    metrics.data.resize(metrics.data.size() + columns, 0.0);
    std::size_t lut = 0;
    const auto put = [&](double value) {
        metrics.at(day, world.column_lut[lut++]) = value;
    };
    for (std::size_t p = 0; p < world.populations.size(); ++p) {
        const Population& pop = world.populations[p];
        long long susceptible = 0;
        long long infected = 0;
        long long recovered = 0;
        for (const SirCompartments& c : pop.compartments) {
            susceptible += c.susceptible;
            infected += c.infected;
            recovered += c.recovered;
        }
        put(static_cast<double>(susceptible));
        put(static_cast<double>(infected));
        put(static_cast<double>(recovered));
        put(static_cast<double>(world.new_infections_today[p]));
        put(static_cast<double>(world.deaths_today[p]));
    }
    for (const Hospital& hospital : world.hospitals) {
        for (const CareService& service : hospital.services) {
            put(static_cast<double>(service.occupancy));
            double capacity = 0.0;
            if (service.enabled) {
                capacity = service.capacity
                               ? static_cast<double>(*service.capacity)
                               : -1.0;  // -1 marks an unbounded service
            }
            put(capacity);
            put(static_cast<double>(service.queue_length));
            put(service.mean_wait);
            put(service.utilization);
            put(service.attention_quality);
            put(day < static_cast<int>(service.admissions.size())
                    ? static_cast<double>(service.admissions[day])
                    : 0.0);
        }
    }
    for (const ItNode& node : world.it_nodes) {
        put(node.q_effective);
        put(static_cast<double>(node.attacks_received));
    }
}

void finalize_aggregates(World& world) {
    std::vector<std::pair<std::string, double>> aggregates;
    double total_deaths = 0.0;
    for (const Population& pop : world.populations) {
        const std::size_t col = world.schema->find("pop." + pop.id, "deaths");
        double deaths = 0.0;
        for (int day = 0; day <= world.clock.step; ++day) {
            deaths += world.metrics.at(day, col);
        }
        aggregates.emplace_back("deaths.pop." + pop.id, deaths);
        total_deaths += deaths;
    }
    aggregates.emplace_back("deaths.total", total_deaths);
    for (int li = 0; li < kServiceLevels; ++li) {
        double stay_days = 0.0;
        long long stays = 0;
        for (const Hospital& hospital : world.hospitals) {
            const CareService& service = hospital.services[li];
            for (double days : service.completed_stay_days) {
                stay_days += days;
            }
            for (long long count : service.completed_stays) {
                stays += count;
            }
        }
        aggregates.emplace_back(
            "mean_treatment_days." + std::string(to_token(service_level(li))),
            stays > 0 ? stay_days / static_cast<double>(stays) : 0.0);
    }
    for (const Hospital& hospital : world.hospitals) {
        for (const CareService& service : hospital.services) {
            const std::string entity = "hospital." + hospital.id + "." +
                                       std::string(to_token(service.level));
            const std::size_t col = world.schema->find(entity, "utilization");
            double peak = 0.0;
            for (int day = 0; day <= world.clock.step; ++day) {
                peak = std::max(peak, world.metrics.at(day, col));
            }
            aggregates.emplace_back("peak_utilization." + entity, peak);
        }
    }
    std::sort(aggregates.begin(), aggregates.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    world.metrics.aggregates = std::move(aggregates);
}

}  // namespace detail

void phase_cyber(World& world) {
    const int day = world.clock.step;
    for (ItNode& node : world.it_nodes) {
        recovery_step(node, world.cyber);
    }
    std::vector<std::unique_ptr<RngStream>> node_streams(world.it_nodes.size());
    const auto node_stream = [&](std::uint16_t n) -> RngStream& {
        if (!node_streams[n]) {
            node_streams[n] = std::make_unique<RngStream>(
                world.master_seed, world.run_index,
                stream_key(StreamDomain::it_node, n), day);
        }
        return *node_streams[n];
    };
    for (const Attacker& attacker : world.attackers) {
        for (const auto& [event, target] :
             launch_attacks(attacker, day, world.it_nodes.size())) {
            resolve_attack(world.it_nodes[target], *event, attacker.threat_level,
                           world.cyber, node_stream(target));
        }
    }
    // Infected nodes try to pass the infection to their graph neighbors.
    for (std::uint16_t n = 0; n < world.it_nodes.size(); ++n) {
        if (!world.it_nodes[n].infected) {
            continue;
        }
        AttackEvent relay;
        relay.kind = AttackKind::botnet;
        relay.start_day = day;
        relay.payload = world.it_nodes[n].bot_payload;
        for (std::uint16_t neighbor : world.node_neighbors[n]) {
            if (world.it_nodes[neighbor].infected) {
                continue;
            }
            if (node_stream(n).bernoulli(world.cyber.botnet_spread_probability)) {
                resolve_attack(world.it_nodes[neighbor], relay, 1.0, world.cyber,
                               node_stream(neighbor));
            }
        }
    }
    propagate_dependencies(world.it_nodes, world.topo_order);
    for (Hospital& hospital : world.hospitals) {
        const double q_eff = world.it_nodes.empty()
                                 ? 1.0
                                 : world.it_nodes[hospital.it_node].q_effective;
        const HospitalCoupling coupling =
            couple_to_hospital(q_eff, world.quality.floor);
        for (CareService& service : hospital.services) {
            service.q_it = service.level == CareLevel::mhealth
                               ? coupling.mhealth_q_it
                               : coupling.clinical_q_it;
            service.available =
                service.enabled && (service.level != CareLevel::mhealth ||
                                    coupling.mhealth_available);
        }
    }
}

void phase_demand(World& world) {
    const int day = world.clock.step;
    // Forces of infection use a simultaneous snapshot so that population
    // update order cannot matter.
    std::vector<std::vector<double>> pressure(world.populations.size());
    for (std::size_t p = 0; p < world.populations.size(); ++p) {
        const Population& pop = world.populations[p];
        pressure[p].resize(pop.compartments.size(), 0.0);
        for (std::size_t c = 0; c < pop.compartments.size(); ++c) {
            const SirCompartments& own = pop.compartments[c];
            if (world.mixing.empty()) {
                pressure[p][c] = own.alive() > 0
                                     ? static_cast<double>(own.infected) /
                                           static_cast<double>(own.alive())
                                     : 0.0;
                continue;
            }
            double mixed = 0.0;
            for (std::size_t q = 0; q < world.populations.size(); ++q) {
                const double weight = world.mixing[p][q];
                if (weight <= 0.0) {
                    continue;
                }
                for (const SirCompartments& other :
                     world.populations[q].compartments) {
                    if (other.disease == own.disease && other.alive() > 0) {
                        mixed += weight * static_cast<double>(other.infected) /
                                 static_cast<double>(other.alive());
                    }
                }
            }
            pressure[p][c] = mixed;
        }
    }
    for (std::uint16_t p = 0; p < world.populations.size(); ++p) {
        Population& pop = world.populations[p];
        RngStream rng(world.master_seed, world.run_index,
                      stream_key(StreamDomain::population, p), day);
        for (std::size_t c = 0; c < pop.compartments.size(); ++c) {
            SirCompartments& compartments = pop.compartments[c];
            const double beta = world.diseases[compartments.disease].sir.beta;
            const double mean =
                beta * static_cast<double>(compartments.susceptible) * pressure[p][c];
            const long long infections =
                poisson_capped(mean, compartments.susceptible, rng);
            compartments.susceptible -= infections;
            compartments.infected += infections;
            world.new_infections_today[p] += infections;
            for (long long k = 0; k < infections; ++k) {
                detail::spawn_patient(world, p, compartments.disease,
                                      HealthState::very_mild, /*sir_tracked=*/true,
                                      day);
            }
        }
        const long long background =
            baseline_demand(pop.size, pop.baseline_incidence_per_100k, rng);
        for (long long k = 0; k < background; ++k) {
            detail::spawn_from_distribution(world, p, pop.baseline_disease,
                                            pop.baseline_severity,
                                            /*sir_tracked=*/false, day);
        }
        for (const MciArrival& arrival : mci_surge(pop, day, rng)) {
            for (long long k = 0; k < arrival.count; ++k) {
                detail::spawn_patient(world, p, arrival.disease, arrival.state,
                                      /*sir_tracked=*/false, day);
            }
        }
    }
}

void phase_allocation(World& world) {
    run_allocation(world.hospitals, world.patients, world.clock.step,
                   world.quality);
}

void phase_progression(World& world) {
    const int day = world.clock.step;
    std::vector<std::uint32_t> still_active;
    still_active.reserve(world.active.size());
    for (const std::uint32_t id : world.active) {
        Patient& patient = world.patients[id];
        const CareLevel care = patient.care_received;
        const double quality =
            (care == CareLevel::no_followup || patient.hospital == kNoHospital)
                ? 1.0
                : world.hospitals[patient.hospital].service(care).attention_quality;
        RngStream rng(world.master_seed, world.run_index,
                      stream_key(StreamDomain::patient, id), day);
        const HealthState before = patient.state;
        patient_step(patient, world.diseases[patient.disease], quality, day, rng);
        if (patient.state == before) {
            still_active.push_back(id);
            continue;
        }
        if (is_ill(patient.state)) {
            // Worsened: slots are kept, but the waiting-list entry moves to
            // the new target level; admission is re-evaluated next day.
            seek_care(id, world.patients, world.hospitals, day);
            still_active.push_back(id);
            continue;
        }
        // Episode over: free the slot and settle the SIR bookkeeping.
        release_slot(patient, world.hospitals, day, /*care_through_today=*/true);
        leave_queue(patient, world.hospitals);
        Population& pop = world.populations[patient.population];
        if (patient.sir_tracked) {
            for (SirCompartments& compartments : pop.compartments) {
                if (compartments.disease == patient.disease) {
                    --compartments.infected;
                    if (patient.state == HealthState::healthy) {
                        ++compartments.recovered;
                    } else {
                        ++compartments.deaths;
                    }
                    break;
                }
            }
        }
        if (patient.state == HealthState::death) {
            ++world.deaths_today[patient.population];
        }
    }
    world.active = std::move(still_active);
}

void phase_metrics(World& world) {
    detail::sample_metrics(world);
}

void step(World& world) {
    if (world.clock.step >= world.clock.horizon) {
        throw std::logic_error("step: past the simulation horizon");
    }
    ++world.clock.step;
    std::fill(world.new_infections_today.begin(),
              world.new_infections_today.end(), 0);
    std::fill(world.deaths_today.begin(), world.deaths_today.end(), 0);
    phase_cyber(world);
    phase_demand(world);
    phase_allocation(world);
    phase_progression(world);
    phase_metrics(world);
}

RunMetrics run_simulation(const ScenarioConfig& scenario,
                          std::uint64_t master_seed, std::uint32_t run_index) {
    World world = build_world(scenario, master_seed, run_index);
    while (world.clock.step < world.clock.horizon) {
        step(world);
    }
    detail::finalize_aggregates(world);
    return std::move(world.metrics);
}

void parallel_for(std::size_t count, int max_threads,
                  const std::function<void(std::size_t)>& fn) {
    if (count == 0) {
        return;
    }
    unsigned workers = max_threads > 0 ? static_cast<unsigned>(max_threads)
                                       : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) {
                    return;
                }
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (std::thread& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

MonteCarloResult run_montecarlo(const ScenarioConfig& scenario, int n_runs,
                                std::uint64_t master_seed, int max_threads) {
    if (n_runs < 1) {
        throw std::invalid_argument("run_montecarlo: n_runs must be >= 1");
    }
    MonteCarloResult result;
    result.runs.resize(n_runs);
    parallel_for(static_cast<std::size_t>(n_runs), max_threads,
                 [&](std::size_t run) {
                     result.runs[run] = run_simulation(
                         scenario, master_seed, static_cast<std::uint32_t>(run));
                 });
    // The mean folds the stored results in run order, so scheduling cannot
    // change a single bit of it.
    result.mean = mean_of(result.runs);
    return result;
}

}  // namespace resilsim
