#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resilsim/disease.hpp"
#include "resilsim/health.hpp"

namespace resilsim {

/// Constants of the attention-quality and utilization laws.
struct QualityParams {
    double saturation_slope = 0.5;  // quality lost per unit of overload
    double floor = 0.25;            // lowest quality of a saturated service
    int window_days = 14;           // trailing window of the load estimate
    bool operator==(const QualityParams&) const = default;
};

/// One care level of a hospital: bounded slots, an FCFS waiting list and the
/// daily counters behind the utilization and quality laws.
struct CareService {
    CareLevel level = CareLevel::mhealth;
    bool enabled = true;
    std::optional<long long> capacity;     // nullopt: unbounded
    std::vector<std::uint32_t> occupants;  // admission order
    std::vector<std::uint32_t> queue;      // (queue_entry_day, id) ascending

    // Daily IT coupling and derived quality, refreshed by the engine.
    double q_it = 1.0;
    bool available = true;
    double attention_quality = 1.0;
    double utilization = 0.0;

    // Per-day counters, indexed by day; sized horizon + 1 by the builder.
    std::vector<long long> arrivals;    // new demand episodes
    std::vector<long long> admissions;  // slots granted, transfers included
    std::vector<long long> discharges;  // slots released
    std::vector<double> completed_stay_days;
    std::vector<long long> completed_stays;
    long long occupant_admission_day_sum = 0;

    // End-of-allocation snapshots reported by the metrics phase.
    long long occupancy = 0;
    long long queue_length = 0;
    double mean_wait = 0.0;

    bool has_free_slot() const {
        return enabled && (!capacity.has_value() ||
                           static_cast<long long>(occupants.size()) < *capacity);
    }
    bool operator==(const CareService&) const = default;
};

struct Hospital {
    std::string id;
    std::uint16_t it_node = 0;
    std::vector<std::uint16_t> referral_partners;  // scanned in this order
    bool referral_enabled = false;
    std::array<CareService, kServiceLevels> services;  // mhealth .. icu

    CareService& service(CareLevel c) { return services[service_index(c)]; }
    const CareService& service(CareLevel c) const {
        return services[service_index(c)];
    }
    bool operator==(const Hospital&) const = default;
};

/// Best care level the patient's hospital can ever offer for the current
/// state: the highest enabled service at or below the state's requirement,
/// no_followup when nothing qualifies or the patient has no hospital.
CareLevel target_care_level(const Patient& patient,
                            const std::vector<Hospital>& hospitals);

/// Joins or moves the patient's waiting-list entry after a spawn or a state
/// change. Any slot already held is kept while waiting for a better one.
void seek_care(std::uint32_t patient_id, std::vector<Patient>& patients,
               std::vector<Hospital>& hospitals, int day);

/// Releases the patient's service slot, recording the completed stay;
/// `care_through_today` counts the current day as a day of care (discharge),
/// while moves between services do not.
void release_slot(Patient& patient, std::vector<Hospital>& hospitals, int day,
                  bool care_through_today);

/// Removes the patient from their waiting list, if any.
void leave_queue(Patient& patient, std::vector<Hospital>& hospitals);

/// Grants the patient a slot at `level` of their current hospital, releasing
/// any lower slot held and clearing the waiting-list entry when the target
/// level was reached.
void admit(Patient& patient, std::vector<Hospital>& hospitals, CareLevel level,
           int day);

/// One day's allocation sweep across all hospitals: FCFS admission from the
/// waiting lists (sicker patients first when they compete for a lower level),
/// promotion as slots free up, inter-hospital referral of patients whose
/// required level is full, repeated until no further move is possible; then
/// utilization, attention quality and occupancy snapshots are refreshed.
void run_allocation(std::vector<Hospital>& hospitals,
                    std::vector<Patient>& patients, int day,
                    const QualityParams& params);

/// Saturation law: nominal up to full utilization, then a linear slide to
/// the configured floor. Returns q_it * q_occ.
double service_quality(double q_it, double utilization,
                       const QualityParams& params);

/// Offered load over the trailing window: arrival rate times mean stay,
/// divided by capacity. 0 before any demand; above 1 means overload.
double utilization_rate(const CareService& service, int day, int window_days);

}  // namespace resilsim
