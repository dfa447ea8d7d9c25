#include "resilsim/disease.hpp"

#include <stdexcept>

namespace resilsim {

bool DiseaseSpec::admissible(HealthState h, CareLevel c) {
    return is_ill(h) && c <= required_care(h);
}

double DiseaseSpec::sojourn(HealthState h, CareLevel c) const {
    return mean_days[ill_index(h)][static_cast<int>(c)];
}

const OutcomeShares& DiseaseSpec::outcome(HealthState h, CareLevel c) const {
    return outcomes[ill_index(h)][static_cast<int>(c)];
}

TransitionProbs derive_transition_probs(const DiseaseSpec& spec, HealthState h,
                                        CareLevel c) {
    if (!is_ill(h)) {
        return TransitionProbs{1.0, 0.0, 0.0, 0.0};
    }
    if (!DiseaseSpec::admissible(h, c)) {
        throw std::invalid_argument("derive_transition_probs: care above requirement");
    }
    const double mean_days = spec.sojourn(h, c);
    if (!(mean_days >= 1.0)) {
        throw std::invalid_argument("derive_transition_probs: mean sojourn below 1 day");
    }
    const double exit_rate = 1.0 / mean_days;
    const OutcomeShares& q = spec.outcome(h, c);
    return TransitionProbs{
        1.0 - exit_rate,
        q.worsening * exit_rate,
        q.recovery * exit_rate,
        q.death * exit_rate,
    };
}

TransitionProbs apply_quality(const TransitionProbs& nominal,
                              const TransitionProbs& degraded, double quality) {
    if (!(quality >= 0.0) || !(quality <= 1.0)) {
        throw std::invalid_argument("apply_quality: quality outside [0, 1]");
    }
    // Exact endpoints, both already normalized.
    if (quality == 1.0) {
        return nominal;
    }
    if (quality == 0.0) {
        return degraded;
    }
    const double w = quality * quality;
    TransitionProbs probs{
        degraded.stay + w * (nominal.stay - degraded.stay),
        degraded.worsening + w * (nominal.worsening - degraded.worsening),
        degraded.recovery + w * (nominal.recovery - degraded.recovery),
        degraded.death + w * (nominal.death - degraded.death),
    };
    const double total = probs.sum();
    probs.stay /= total;
    probs.worsening /= total;
    probs.recovery /= total;
    probs.death /= total;
    return probs;
}

void patient_step(Patient& patient, const DiseaseSpec& spec, double quality,
                  int day, RngStream& rng) {
    if (!is_ill(patient.state)) {
        return;
    }
    const CareLevel care = patient.care_received;
    const TransitionProbs nominal = derive_transition_probs(spec, patient.state, care);
    TransitionProbs effective;
    if (care == CareLevel::no_followup) {
        // Nothing below no_followup; quality has no further effect.
        effective = nominal;
    } else {
        const TransitionProbs degraded =
            derive_transition_probs(spec, patient.state, lower_care(care));
        effective = apply_quality(nominal, degraded, quality);
    }
    const std::array<double, 4> weights = {effective.stay, effective.worsening,
                                           effective.recovery, effective.death};
    switch (rng.categorical(weights)) {
        case 0:
            return;  // stay
        case 1:
            patient.state = next_worse(patient.state);
            break;
        case 2:
            patient.state = HealthState::healthy;
            break;
        default:
            patient.state = HealthState::death;
            break;
    }
    patient.state_entry_day = day;
}

}  // namespace resilsim
