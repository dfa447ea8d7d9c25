#include "resilsim/cyber.hpp"

#include <algorithm>
#include <cmath>

namespace resilsim {

std::vector<std::pair<const AttackEvent*, std::uint16_t>> launch_attacks(
    const Attacker& attacker, int day, std::size_t node_count) {
    std::vector<std::pair<const AttackEvent*, std::uint16_t>> launched;
    for (const AttackEvent& event : attacker.campaign) {
        if (event.start_day != day) {
            continue;
        }
        if (event.target.has_value()) {
            launched.emplace_back(&event, *event.target);
        } else {
            for (std::size_t n = 0; n < node_count; ++n) {
                launched.emplace_back(&event, static_cast<std::uint16_t>(n));
            }
        }
    }
    return launched;
}

namespace {

void enter_outage(ItNode& node, int days) {
    if (days <= 0) {
        return;
    }
    node.status = ItStatus::unavailable;
    node.degraded_quality = 0.0;
    // A second hit during an outage extends it, never shortens it.
    node.status_remaining = std::max(node.status_remaining, days);
    node.ramp_remaining = 0;
}

void enter_degraded(ItNode& node, double quality, int days) {
    if (node.status == ItStatus::unavailable || days <= 0) {
        return;
    }
    node.status = ItStatus::degraded;
    node.degraded_quality = std::clamp(quality, 0.0, 1.0);
    node.status_remaining = std::max(node.status_remaining, days);
}

}  // namespace

void resolve_attack(ItNode& node, const AttackEvent& event, double threat,
                    const CyberParams& params, RngStream& rng) {
    ++node.attacks_received;
    const double success_p = std::min(1.0, node.vulnerability * std::max(0.0, threat));
    if (!rng.bernoulli(success_p)) {
        return;
    }
    switch (event.kind) {
        case AttackKind::ransomware: {
            const double outage =
                params.recovery_days_override.value_or(
                    event.base_outage_days / std::max(node.recovery_capacity, 1e-12));
            enter_outage(node, event.detection_delay_days +
                                   static_cast<int>(std::ceil(outage)));
            break;
        }
        case AttackKind::ddos: {
            if (event.request_load <= node.service_capacity) {
                break;  // absorbed without effect
            }
            if (node.service_capacity <= 0.0 ||
                event.request_load > node.service_capacity * params.ddos_absorb_factor) {
                enter_outage(node, event.duration_days);
            } else {
                enter_degraded(node, node.service_capacity / event.request_load,
                               event.duration_days);
            }
            break;
        }
        case AttackKind::botnet: {
            node.infected = true;
            node.bot_payload = event.payload;
            if (!event.payload.empty()) {
                // The bot detonates its payload on the freshly infected node.
                resolve_attack(node, event.payload.front(), threat, params, rng);
            }
            break;
        }
    }
}

void recovery_step(ItNode& node, const CyberParams& params) {
    if (node.status == ItStatus::nominal) {
        return;
    }
    if (node.status_remaining > 0) {
        --node.status_remaining;
    }
    if (node.status_remaining > 0) {
        return;
    }
    if (node.status == ItStatus::unavailable && params.recovery_ramp_days > 0) {
        // Optional gradual return: quality climbs linearly over the ramp.
        node.status = ItStatus::degraded;
        node.ramp_remaining = params.recovery_ramp_days;
        node.status_remaining = params.recovery_ramp_days;
        node.degraded_quality = 1.0 / (params.recovery_ramp_days + 1);
        return;
    }
    node.status = ItStatus::nominal;
    node.degraded_quality = 1.0;
    node.ramp_remaining = 0;
}

double own_quality(const ItNode& node) {
    switch (node.status) {
        case ItStatus::nominal:
            return 1.0;
        case ItStatus::degraded:
            if (node.ramp_remaining > 0) {
                const int total = node.ramp_remaining;
                const int done = total - node.status_remaining;
                return static_cast<double>(done + 1) / (total + 1);
            }
            return node.degraded_quality;
        case ItStatus::unavailable:
            return 0.0;
    }
    return 1.0;
}

std::vector<double> propagate_dependencies(
    std::vector<ItNode>& nodes, const std::vector<std::uint16_t>& topo_order) {
    std::vector<double> q_eff(nodes.size(), 1.0);
    for (std::uint16_t index : topo_order) {
        ItNode& node = nodes[index];
        double quality = own_quality(node);
        double upstream = 1.0;
        for (std::uint16_t dep : node.depends_on) {
            upstream = std::min(upstream, q_eff[dep]);
        }
        q_eff[index] = quality * upstream;
        node.q_effective = q_eff[index];
    }
    return q_eff;
}

HospitalCoupling couple_to_hospital(double node_q_effective, double quality_floor) {
    HospitalCoupling coupling;
    coupling.mhealth_q_it = node_q_effective;
    coupling.mhealth_available = node_q_effective > 0.0;
    coupling.clinical_q_it = std::max(quality_floor, node_q_effective);
    return coupling;
}

}  // namespace resilsim
