#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "resilsim/epidemics.hpp"
#include "resilsim/health.hpp"
#include "resilsim/rng.hpp"

namespace resilsim {

/// One-step transition distribution of a patient's health state; components
/// sum to 1.
struct TransitionProbs {
    double stay = 1.0;
    double worsening = 0.0;
    double recovery = 0.0;
    double death = 0.0;

    double sum() const { return stay + worsening + recovery + death; }
    bool operator==(const TransitionProbs&) const = default;
};

/// Eventual-outcome proportions of one (state, care) cell; sum to 1.
struct OutcomeShares {
    double recovery = 0.0;
    double worsening = 0.0;
    double death = 0.0;
    bool operator==(const OutcomeShares&) const = default;
};

/// Full parameterization of one disease: SIR contagion rates plus, for every
/// admissible (ill state, care level) pair, the mean sojourn in days and the
/// eventual outcome proportions. Care above a state's requirement is never
/// delivered, so those cells stay unset.
struct DiseaseSpec {
    std::string id;
    SirParams sir;
    // Indexed [ill_index(state)][care level].
    std::array<std::array<double, kCareLevels>, kIllStates> mean_days{};
    std::array<std::array<OutcomeShares, kCareLevels>, kIllStates> outcomes{};

    static bool admissible(HealthState h, CareLevel c);
    double sojourn(HealthState h, CareLevel c) const;
    const OutcomeShares& outcome(HealthState h, CareLevel c) const;
    bool operator==(const DiseaseSpec&) const = default;
};

/// Transition probabilities of state h under care c, assuming a geometric
/// sojourn of mean T: the exit probability per day is 1/T and the exit mass
/// splits by the eventual-outcome proportions, so
///   p_stay = 1 - 1/T,  p_x = Q_x / T.
/// Healthy and death are absorbing. Rejects T < 1 and inadmissible pairs.
TransitionProbs derive_transition_probs(const DiseaseSpec& spec, HealthState h,
                                        CareLevel c);

/// Quadratic interpolation between degraded (q = 0) and nominal (q = 1)
/// transition probabilities: p(q) = p_deg + q^2 * (p_nom - p_deg),
/// renormalized to sum 1. Rejects q outside [0, 1].
TransitionProbs apply_quality(const TransitionProbs& nominal,
                              const TransitionProbs& degraded, double quality);

constexpr std::uint16_t kNoHospital = 0xffff;

/// Individual agent carrying one disease episode.
struct Patient {
    std::uint32_t id = 0;
    std::uint16_t population = 0;
    std::uint16_t disease = 0;
    std::uint16_t hospital = kNoHospital;
    HealthState state = HealthState::healthy;
    CareLevel care_received = CareLevel::no_followup;
    bool sir_tracked = false;      // counted in an SIR infected compartment
    std::int32_t state_entry_day = 0;
    std::int32_t admission_day = -1;  // -1: holds no service slot
    std::int32_t queue_entry_day = -1;  // -1: not waiting
    CareLevel queued_level = CareLevel::no_followup;

    bool alive() const { return state != HealthState::death; }
    bool operator==(const Patient&) const = default;
};

/// Advances one day of disease progression. The effective transition
/// distribution interpolates between the received care level (nominal) and
/// one care level below it (degraded) according to `quality`; patients
/// without a service slot progress under no_followup. Absorbing states are
/// left untouched.
void patient_step(Patient& patient, const DiseaseSpec& spec, double quality,
                  int day, RngStream& rng);

}  // namespace resilsim
