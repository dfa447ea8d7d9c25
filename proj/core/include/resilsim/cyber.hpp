#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resilsim/rng.hpp"

namespace resilsim {

enum class ItStatus : std::uint8_t { nominal, degraded, unavailable };

enum class AttackKind : std::uint8_t { botnet, ransomware, ddos };

/// A single attack instance (or the template an infected relay replays).
struct AttackEvent {
    AttackKind kind = AttackKind::ransomware;
    int start_day = 0;
    std::optional<std::uint16_t> target;  // nullopt: broadcast to all nodes
    double base_outage_days = 0.0;        // ransomware
    int detection_delay_days = 0;         // days before recovery starts
    int duration_days = 0;                // ddos
    double request_load = 0.0;            // ddos, requests per day
    std::vector<AttackEvent> payload;     // botnet: 0..1 events detonated on
                                          // newly infected nodes
    bool operator==(const AttackEvent&) const = default;
};

/// Computation/telecom node in the dependency graph.
struct ItNode {
    std::string id;
    double service_capacity = 0.0;  // requests handled per day
    double vulnerability = 0.0;     // probability an incoming attack succeeds
    double recovery_capacity = 1.0; // divides ransomware outage durations
    std::vector<std::uint16_t> depends_on;

    ItStatus status = ItStatus::nominal;
    double degraded_quality = 1.0;  // own quality while status == degraded
    int status_remaining = 0;       // days left in a non-nominal status
    int ramp_remaining = 0;         // days left in a post-outage ramp
    bool infected = false;          // botnet relay
    std::vector<AttackEvent> bot_payload;
    long long attacks_received = 0;
    double q_effective = 1.0;       // set by propagate_dependencies

    bool operator==(const ItNode&) const = default;
};

struct Attacker {
    std::string id;
    double threat_level = 1.0;
    std::vector<AttackEvent> campaign;
    bool operator==(const Attacker&) const = default;
};

/// Knobs of the cyber layer that are not per-node.
struct CyberParams {
    double botnet_spread_probability = 0.1;  // per neighbor per day
    double ddos_absorb_factor = 2.0;  // load <= capacity*factor only degrades
    int recovery_ramp_days = 0;       // 0: step recovery
    std::optional<double> recovery_days_override;  // forces outage length
    bool operator==(const CyberParams&) const = default;
};

/// Events of the attacker's campaign that start today, with broadcast targets
/// fanned out over all node indices.
std::vector<std::pair<const AttackEvent*, std::uint16_t>> launch_attacks(
    const Attacker& attacker, int day, std::size_t node_count);

/// Applies one attack to a node. Success is Bernoulli with probability
/// min(1, vulnerability * threat). The received-attack counter increments on
/// every invocation, successful or not.
void resolve_attack(ItNode& node, const AttackEvent& event, double threat,
                    const CyberParams& params, RngStream& rng);

/// Counts down the node's non-nominal status; returns to nominal when the
/// timer expires, optionally through a linear quality ramp.
void recovery_step(ItNode& node, const CyberParams& params);

/// Own functional quality, before dependencies: 1 when nominal, the degraded
/// quality while degraded, 0 while unavailable.
double own_quality(const ItNode& node);

/// Effective quality of every node: q_eff(n) = q_own(n) * min over
/// dependencies of q_eff(dep), evaluated in the supplied topological order.
/// Results are written to node.q_effective and returned.
std::vector<double> propagate_dependencies(std::vector<ItNode>& nodes,
                                           const std::vector<std::uint16_t>& topo_order);

/// Per-hospital effect of the coupled node's effective quality. The mHealth
/// service runs entirely on the IT system and closes when the node is fully
/// out; clinical services degrade but never below the configured floor.
struct HospitalCoupling {
    double clinical_q_it = 1.0;
    double mhealth_q_it = 1.0;
    bool mhealth_available = true;
};

HospitalCoupling couple_to_hospital(double node_q_effective, double quality_floor);

}  // namespace resilsim
