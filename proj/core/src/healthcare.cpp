#include "resilsim/healthcare.hpp"

#include <algorithm>
#include <stdexcept>

namespace resilsim {

namespace {

void erase_value(std::vector<std::uint32_t>& values, std::uint32_t value) {
    const auto it = std::find(values.begin(), values.end(), value);
    if (it != values.end()) {
        values.erase(it);
    }
}

}  // namespace

CareLevel target_care_level(const Patient& patient,
                            const std::vector<Hospital>& hospitals) {
    if (!is_ill(patient.state) || patient.hospital == kNoHospital) {
        return CareLevel::no_followup;
    }
    const CareLevel required = required_care(patient.state);
    if (required == CareLevel::no_followup) {
        return CareLevel::no_followup;
    }
    const Hospital& hospital = hospitals[patient.hospital];
    for (int c = static_cast<int>(required); c >= static_cast<int>(CareLevel::mhealth); --c) {
        if (hospital.service(static_cast<CareLevel>(c)).enabled) {
            return static_cast<CareLevel>(c);
        }
    }
    return CareLevel::no_followup;
}

void seek_care(std::uint32_t patient_id, std::vector<Patient>& patients,
               std::vector<Hospital>& hospitals, int day) {
    Patient& patient = patients[patient_id];
    const CareLevel target = target_care_level(patient, hospitals);
    if (target == CareLevel::no_followup || patient.care_received >= target) {
        leave_queue(patient, hospitals);
        return;
    }
    if (patient.queue_entry_day >= 0 && patient.queued_level == target) {
        return;  // already waiting at the right level; keep the position
    }
    leave_queue(patient, hospitals);
    CareService& service = hospitals[patient.hospital].service(target);
    patient.queue_entry_day = day;
    patient.queued_level = target;
    // Keep the list ordered by (entry day, id). All existing entries carry
    // entry days <= today, but same-day entries can reach the list out of id
    // order, so walk back over today's larger ids.
    auto pos = service.queue.end();
    while (pos != service.queue.begin()) {
        const Patient& ahead = patients[*(pos - 1)];
        if (ahead.queue_entry_day < day ||
            (ahead.queue_entry_day == day && ahead.id < patient.id)) {
            break;
        }
        --pos;
    }
    service.queue.insert(pos, patient.id);
    if (day >= 0 && day < static_cast<int>(service.arrivals.size())) {
        ++service.arrivals[day];
    }
}

void release_slot(Patient& patient, std::vector<Hospital>& hospitals, int day,
                  bool care_through_today) {
    if (patient.admission_day < 0 ||
        patient.care_received == CareLevel::no_followup ||
        patient.hospital == kNoHospital) {
        patient.care_received = CareLevel::no_followup;
        patient.admission_day = -1;
        return;
    }
    CareService& service =
        hospitals[patient.hospital].service(patient.care_received);
    erase_value(service.occupants, patient.id);
    service.occupant_admission_day_sum -= patient.admission_day;
    if (day >= 0 && day < static_cast<int>(service.discharges.size())) {
        ++service.discharges[day];
        const double stay =
            day - patient.admission_day + (care_through_today ? 1 : 0);
        service.completed_stay_days[day] += stay;
        ++service.completed_stays[day];
    }
    patient.care_received = CareLevel::no_followup;
    patient.admission_day = -1;
}

void leave_queue(Patient& patient, std::vector<Hospital>& hospitals) {
    if (patient.queue_entry_day < 0 || patient.hospital == kNoHospital) {
        patient.queue_entry_day = -1;
        return;
    }
    CareService& service = hospitals[patient.hospital].service(patient.queued_level);
    erase_value(service.queue, patient.id);
    patient.queue_entry_day = -1;
    patient.queued_level = CareLevel::no_followup;
}

void admit(Patient& patient, std::vector<Hospital>& hospitals, CareLevel level,
           int day) {
    if (level == CareLevel::no_followup || patient.hospital == kNoHospital) {
        throw std::logic_error("admit: nothing to admit to");
    }
    release_slot(patient, hospitals, day, /*care_through_today=*/false);
    CareService& service = hospitals[patient.hospital].service(level);
    service.occupants.push_back(patient.id);
    service.occupant_admission_day_sum += day;
    if (day >= 0 && day < static_cast<int>(service.admissions.size())) {
        ++service.admissions[day];
    }
    patient.care_received = level;
    patient.admission_day = day;
    if (patient.queue_entry_day >= 0 && patient.queued_level <= level) {
        leave_queue(patient, hospitals);
    }
}

namespace {

/// Fills free slots of every service of one hospital, highest level first.
/// Candidates are the hospital's queued patients holding less care than the
/// level at hand; sicker patients (queued for a higher level) outrank the
/// level's own queue, FCFS breaks ties within a level.
bool fill_pass(std::vector<Hospital>& hospitals, std::uint16_t hospital_index,
               std::vector<Patient>& patients, int day) {
    Hospital& hospital = hospitals[hospital_index];
    bool changed = false;
    for (int li = kServiceLevels - 1; li >= 0; --li) {
        CareService& service = hospital.services[li];
        const CareLevel level = service_level(li);
        if (!service.enabled || !service.available || !service.has_free_slot()) {
            continue;
        }
        for (int ri = kServiceLevels - 1; ri >= li && service.has_free_slot(); --ri) {
            const std::vector<std::uint32_t> waiting = hospital.services[ri].queue;
            for (std::uint32_t pid : waiting) {
                if (!service.has_free_slot()) {
                    break;
                }
                Patient& patient = patients[pid];
                if (patient.care_received >= level) {
                    continue;
                }
                admit(patient, hospitals, level, day);
                changed = true;
            }
        }
    }
    return changed;
}

/// Moves patients whose target level is full at their hospital to the first
/// referral partner with a free slot at that level.
bool referral_pass(std::vector<Hospital>& hospitals, std::uint16_t hospital_index,
                   std::vector<Patient>& patients, int day) {
    Hospital& hospital = hospitals[hospital_index];
    if (!hospital.referral_enabled || hospital.referral_partners.empty()) {
        return false;
    }
    bool changed = false;
    for (int li = kServiceLevels - 1; li >= 0; --li) {
        CareService& service = hospital.services[li];
        if (!service.enabled || !service.available || service.has_free_slot()) {
            continue;  // referral is for exhausted capacity, not outages
        }
        const std::vector<std::uint32_t> waiting = service.queue;
        for (std::uint32_t pid : waiting) {
            Patient& patient = patients[pid];
            for (std::uint16_t partner_index : hospital.referral_partners) {
                CareService& partner_service =
                    hospitals[partner_index].services[li];
                if (!partner_service.enabled || !partner_service.available ||
                    !partner_service.has_free_slot()) {
                    continue;
                }
                release_slot(patient, hospitals, day, /*care_through_today=*/false);
                leave_queue(patient, hospitals);
                patient.hospital = partner_index;
                if (day >= 0 && day < static_cast<int>(partner_service.arrivals.size())) {
                    ++partner_service.arrivals[day];  // demand moves along
                }
                admit(patient, hospitals, service_level(li), day);
                changed = true;
                break;
            }
        }
    }
    return changed;
}

}  // namespace

void run_allocation(std::vector<Hospital>& hospitals,
                    std::vector<Patient>& patients, int day,
                    const QualityParams& params) {
    // Promotions and referrals free slots behind them; iterate to a fixed
    // point. Every move strictly raises someone's care level, so the loop
    // terminates quickly.
    for (int iteration = 0; iteration < 1000; ++iteration) {
        bool changed = false;
        for (std::uint16_t hi = 0; hi < hospitals.size(); ++hi) {
            changed |= fill_pass(hospitals, hi, patients, day);
        }
        for (std::uint16_t hi = 0; hi < hospitals.size(); ++hi) {
            changed |= referral_pass(hospitals, hi, patients, day);
        }
        if (!changed) {
            break;
        }
    }
    for (Hospital& hospital : hospitals) {
        for (CareService& service : hospital.services) {
            if (!service.enabled) {
                service.utilization = 0.0;
                service.attention_quality = 0.0;
            } else {
                service.utilization =
                    utilization_rate(service, day, params.window_days);
                service.attention_quality =
                    service_quality(service.q_it, service.utilization, params);
            }
            service.occupancy = static_cast<long long>(service.occupants.size());
            service.queue_length = static_cast<long long>(service.queue.size());
            double wait = 0.0;
            for (std::uint32_t pid : service.queue) {
                wait += day - patients[pid].queue_entry_day;
            }
            service.mean_wait =
                service.queue.empty() ? 0.0 : wait / service.queue.size();
        }
    }
}

double service_quality(double q_it, double utilization,
                       const QualityParams& params) {
    const double q_occ =
        utilization <= 1.0
            ? 1.0
            : std::max(params.floor,
                       1.0 - params.saturation_slope * (utilization - 1.0));
    return q_it * q_occ;
}

double utilization_rate(const CareService& service, int day, int window_days) {
    if (day < 0 || window_days < 1 ||
        day >= static_cast<int>(service.arrivals.size())) {
        return 0.0;
    }
    const int from = std::max(0, day - window_days + 1);
    const int days = day - from + 1;
    long long arrivals = 0;
    long long stays = 0;
    double stay_days = 0.0;
    for (int d = from; d <= day; ++d) {
        arrivals += service.arrivals[d];
        stays += service.completed_stays[d];
        stay_days += service.completed_stay_days[d];
    }
    if (arrivals == 0) {
        return 0.0;
    }
    const double arrival_rate = static_cast<double>(arrivals) / days;
    double mean_stay;
    if (stays > 0) {
        mean_stay = stay_days / stays;
    } else if (!service.occupants.empty()) {
        const double n = static_cast<double>(service.occupants.size());
        mean_stay =
            day - static_cast<double>(service.occupant_admission_day_sum) / n + 1.0;
    } else {
        mean_stay = 0.0;
    }
    mean_stay = std::max(mean_stay, 1.0);  // a stay takes at least a day
    if (!service.capacity.has_value()) {
        return 0.0;  // unbounded service never saturates
    }
    const double capacity =
        static_cast<double>(std::max<long long>(1, *service.capacity));
    return arrival_rate * mean_stay / capacity;
}

}  // namespace resilsim
