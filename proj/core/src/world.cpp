#include "resilsim/world.hpp"

#include <algorithm>
#include <numeric>

#include "engine_detail.hpp"

namespace resilsim {

namespace {

template <typename T>
std::vector<std::size_t> sorted_order_by_id(const std::vector<T>& items) {
    std::vector<std::size_t> order(items.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return items[a].id < items[b].id;
    });
    return order;
}

template <typename T>
std::uint16_t index_by_id(const std::vector<T>& items, const std::string& id) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].id == id) {
            return static_cast<std::uint16_t>(i);
        }
    }
    throw std::logic_error("unresolved id '" + id + "' after validation");
}

AttackEvent build_event(const AttackEventConfig& config,
                        const std::vector<ItNodeConfig>& node_configs,
                        const std::vector<ItNode>& nodes) {
    AttackEvent event;
    event.kind = config.kind;
    event.start_day = config.start_day;
    event.base_outage_days = config.base_outage_days;
    event.detection_delay_days = config.detection_delay_days;
    event.duration_days = config.duration_days;
    event.request_load = config.request_load;
    if (config.target) {
        event.target = index_by_id(nodes, *config.target);
    }
    for (const AttackEventConfig& inner : config.payload) {
        event.payload.push_back(build_event(inner, node_configs, nodes));
    }
    return event;
}

}  // namespace

World build_world(const ScenarioConfig& config, std::uint64_t master_seed,
                  std::uint32_t run_index) {
    World world;
    world.master_seed = master_seed;
    world.run_index = run_index;
    world.clock = SimClock{0, config.horizon_days};
    world.quality = QualityParams{config.quality.saturation_slope,
                                  config.quality.floor,
                                  config.quality.utilization_window_days};
    world.cyber = CyberParams{config.cyber.botnet_spread_probability,
                              config.cyber.ddos_absorb_factor,
                              config.cyber.recovery_ramp_days,
                              config.countermeasures.recovery_days_override};
    const std::size_t counters_size =
        static_cast<std::size_t>(config.horizon_days) + 1;

    // Internal ordering is by id, never by declaration position.
    for (std::size_t i : sorted_order_by_id(config.diseases)) {
        const DiseaseConfig& dc = config.diseases[i];
        DiseaseSpec spec;
        spec.id = dc.id;
        spec.sir = dc.sir;
        for (const auto& [state, cells] : dc.states) {
            for (const auto& [care, cell] : cells) {
                spec.mean_days[ill_index(state)][static_cast<int>(care)] =
                    cell.mean_days;
                spec.outcomes[ill_index(state)][static_cast<int>(care)] =
                    OutcomeShares{cell.recovery / 100.0, cell.worsening / 100.0,
                                  cell.death / 100.0};
            }
        }
        world.diseases.push_back(std::move(spec));
    }

    for (std::size_t i : sorted_order_by_id(config.it_nodes)) {
        const ItNodeConfig& nc = config.it_nodes[i];
        ItNode node;
        node.id = nc.id;
        node.service_capacity = nc.service_capacity;
        node.vulnerability = nc.vulnerability;
        node.recovery_capacity = nc.recovery_capacity;
        world.it_nodes.push_back(std::move(node));
    }
    for (std::size_t i : sorted_order_by_id(config.it_nodes)) {
        const ItNodeConfig& nc = config.it_nodes[i];
        ItNode& node = world.it_nodes[index_by_id(world.it_nodes, nc.id)];
        for (const std::string& dep : nc.depends_on) {
            node.depends_on.push_back(index_by_id(world.it_nodes, dep));
        }
        std::sort(node.depends_on.begin(), node.depends_on.end());
    }
    // Topological order (dependencies first) and undirected adjacency.
    {
        const std::size_t n = world.it_nodes.size();
        std::vector<int> indegree(n, 0);
        std::vector<std::vector<std::uint16_t>> out(n);
        world.node_neighbors.assign(n, {});
        for (std::uint16_t i = 0; i < n; ++i) {
            for (std::uint16_t dep : world.it_nodes[i].depends_on) {
                out[dep].push_back(i);
                ++indegree[i];
                world.node_neighbors[i].push_back(dep);
                world.node_neighbors[dep].push_back(i);
            }
        }
        for (auto& neighbors : world.node_neighbors) {
            std::sort(neighbors.begin(), neighbors.end());
            neighbors.erase(std::unique(neighbors.begin(), neighbors.end()),
                            neighbors.end());
        }
        std::vector<std::uint16_t> ready;
        for (std::uint16_t i = 0; i < n; ++i) {
            if (indegree[i] == 0) {
                ready.push_back(i);
            }
        }
        // Smallest index first keeps the order canonical.
        while (!ready.empty()) {
            std::sort(ready.begin(), ready.end(), std::greater<>());
            const std::uint16_t i = ready.back();
            ready.pop_back();
            world.topo_order.push_back(i);
            for (std::uint16_t next : out[i]) {
                if (--indegree[next] == 0) {
                    ready.push_back(next);
                }
            }
        }
    }

    for (std::size_t i : sorted_order_by_id(config.hospitals)) {
        const HospitalConfig& hc = config.hospitals[i];
        Hospital hospital;
        hospital.id = hc.id;
        hospital.it_node = index_by_id(world.it_nodes, hc.it_node);
        hospital.referral_enabled = hc.referral_enabled;
        for (int li = 0; li < kServiceLevels; ++li) {
            CareService& service = hospital.services[li];
            service.level = service_level(li);
            service.enabled = false;
            service.arrivals.assign(counters_size, 0);
            service.admissions.assign(counters_size, 0);
            service.discharges.assign(counters_size, 0);
            service.completed_stay_days.assign(counters_size, 0.0);
            service.completed_stays.assign(counters_size, 0);
        }
        for (const auto& [level, sc] : hc.services) {
            CareService& service = hospital.service(level);
            service.enabled = sc.enabled;
            service.capacity = sc.capacity;
        }
        world.hospitals.push_back(std::move(hospital));
    }
    for (std::size_t i : sorted_order_by_id(config.hospitals)) {
        const HospitalConfig& hc = config.hospitals[i];
        Hospital& hospital = world.hospitals[index_by_id(world.hospitals, hc.id)];
        for (const std::string& partner : hc.referral_partners) {
            hospital.referral_partners.push_back(
                index_by_id(world.hospitals, partner));
        }
    }

    for (std::size_t i : sorted_order_by_id(config.attackers)) {
        const AttackerConfig& ac = config.attackers[i];
        Attacker attacker;
        attacker.id = ac.id;
        attacker.threat_level = ac.threat_level;
        for (const AttackEventConfig& event : ac.campaign) {
            attacker.campaign.push_back(
                build_event(event, config.it_nodes, world.it_nodes));
        }
        std::stable_sort(attacker.campaign.begin(), attacker.campaign.end(),
                         [](const AttackEvent& a, const AttackEvent& b) {
                             return a.start_day < b.start_day;
                         });
        world.attackers.push_back(std::move(attacker));
    }

    for (std::size_t i : sorted_order_by_id(config.populations)) {
        const PopulationConfig& pc = config.populations[i];
        Population pop;
        pop.id = pc.id;
        pop.size = pc.size;
        pop.baseline_incidence_per_100k = pc.baseline_incidence_per_100k;
        pop.baseline_disease =
            pc.baseline_disease ? index_by_id(world.diseases, *pc.baseline_disease)
                                : 0;
        for (const auto& [state, weight] : pc.baseline_severity) {
            pop.baseline_severity[ill_index(state)] = weight;
        }
        for (const PopulationDiseaseConfig& pd : pc.diseases) {
            SirCompartments compartments;
            compartments.disease = index_by_id(world.diseases, pd.disease);
            compartments.susceptible =
                pc.size - pd.initial_infected - pd.initial_recovered;
            compartments.infected = pd.initial_infected;
            compartments.recovered = pd.initial_recovered;
            pop.compartments.push_back(compartments);
        }
        std::sort(pop.compartments.begin(), pop.compartments.end(),
                  [](const SirCompartments& a, const SirCompartments& b) {
                      return a.disease < b.disease;
                  });
        if (!pc.routing.empty()) {
            pop.routing.assign(world.hospitals.size(), 0.0);
            for (const auto& [hospital, weight] : pc.routing) {
                pop.routing[index_by_id(world.hospitals, hospital)] = weight;
            }
        }
        for (const MciConfig& mc : pc.mci_events) {
            MciEvent event;
            event.start_day = mc.day;
            event.casualty_count = mc.count;
            event.disease = mc.disease ? index_by_id(world.diseases, *mc.disease)
                                       : pop.baseline_disease;
            for (const auto& [state, weight] : mc.severity) {
                event.severity[ill_index(state)] = weight;
            }
            pop.mci_events.push_back(std::move(event));
        }
        std::stable_sort(pop.mci_events.begin(), pop.mci_events.end(),
                         [](const MciEvent& a, const MciEvent& b) {
                             return a.start_day < b.start_day;
                         });
        world.populations.push_back(std::move(pop));
    }

    if (!config.contact_matrix.empty()) {
        const std::size_t n = world.populations.size();
        world.mixing.assign(n, std::vector<double>(n, 0.0));
        for (std::size_t p = 0; p < n; ++p) {
            world.mixing[p][p] = 1.0;
        }
        for (const auto& [row_id, row] : config.contact_matrix) {
            const std::uint16_t p = index_by_id(world.populations, row_id);
            std::fill(world.mixing[p].begin(), world.mixing[p].end(), 0.0);
            for (const auto& [col_id, weight] : row) {
                world.mixing[p][index_by_id(world.populations, col_id)] = weight;
            }
        }
    }

    world.new_infections_today.assign(world.populations.size(), 0);
    world.deaths_today.assign(world.populations.size(), 0);

    // Schema: sorted by (entity, metric); the LUT maps the fixed enumeration
    // order used by the sampler onto schema columns.
    {
        auto schema = std::make_shared<MetricsSchema>();
        std::vector<std::pair<MetricColumn, std::size_t>> columns;
        std::size_t position = 0;
        for (const Population& pop : world.populations) {
            for (const char* metric : detail::kPopulationMetrics) {
                columns.push_back({{"pop." + pop.id, metric}, position++});
            }
        }
        for (const Hospital& hospital : world.hospitals) {
            for (const CareService& service : hospital.services) {
                const std::string entity = "hospital." + hospital.id + "." +
                                           std::string(to_token(service.level));
                for (const char* metric : detail::kServiceMetrics) {
                    columns.push_back({{entity, metric}, position++});
                }
            }
        }
        for (const ItNode& node : world.it_nodes) {
            for (const char* metric : detail::kNodeMetrics) {
                columns.push_back({{"it." + node.id, metric}, position++});
            }
        }
        std::sort(columns.begin(), columns.end(),
                  [](const auto& a, const auto& b) {
                      if (a.first.entity != b.first.entity) {
                          return a.first.entity < b.first.entity;
                      }
                      return a.first.metric < b.first.metric;
                  });
        world.column_lut.assign(columns.size(), 0);
        for (std::size_t c = 0; c < columns.size(); ++c) {
            schema->columns.push_back(columns[c].first);
            world.column_lut[columns[c].second] = c;
        }
        world.schema = schema;
        world.metrics.schema = schema;
        world.metrics.horizon = config.horizon_days;
    }

    // Seed patients of the initial infected counts.
    for (std::uint16_t p = 0; p < world.populations.size(); ++p) {
        for (const SirCompartments& compartments : world.populations[p].compartments) {
            for (long long k = 0; k < compartments.infected; ++k) {
                detail::spawn_patient(world, p, compartments.disease,
                                      HealthState::very_mild, /*sir_tracked=*/true,
                                      /*day=*/0);
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
            service.attention_quality = service.enabled ? service.q_it : 0.0;
        }
    }

    detail::sample_metrics(world);
    return world;
}

}  // namespace resilsim
