#include "resilsim/health.hpp"

#include <stdexcept>
#include <string>

namespace resilsim {

CareLevel required_care(HealthState h) {
    switch (h) {
        case HealthState::very_mild:
            return CareLevel::no_followup;
        case HealthState::mild:
            return CareLevel::mhealth;
        case HealthState::moderate:
            return CareLevel::in_person;
        case HealthState::severe:
            return CareLevel::general_bed;
        case HealthState::critical:
            return CareLevel::icu;
        default:
            throw std::invalid_argument("required_care: state is not ill");
    }
}

std::string_view to_token(HealthState h) {
    switch (h) {
        case HealthState::healthy:
            return "healthy";
        case HealthState::very_mild:
            return "very_mild";
        case HealthState::mild:
            return "mild";
        case HealthState::moderate:
            return "moderate";
        case HealthState::severe:
            return "severe";
        case HealthState::critical:
            return "critical";
        case HealthState::death:
            return "death";
    }
    return "?";
}

std::string_view to_token(CareLevel c) {
    switch (c) {
        case CareLevel::no_followup:
            return "no_followup";
        case CareLevel::mhealth:
            return "mHealth";
        case CareLevel::in_person:
            return "inPerson";
        case CareLevel::general_bed:
            return "generalBed";
        case CareLevel::icu:
            return "ICU";
    }
    return "?";
}

HealthState health_state_from_token(std::string_view token) {
    for (int i = 0; i <= static_cast<int>(HealthState::death); ++i) {
        const auto h = static_cast<HealthState>(i);
        if (to_token(h) == token) {
            return h;
        }
    }
    throw std::invalid_argument("unknown health state '" + std::string(token) + "'");
}

CareLevel care_level_from_token(std::string_view token) {
    for (int i = 0; i <= static_cast<int>(CareLevel::icu); ++i) {
        const auto c = static_cast<CareLevel>(i);
        if (to_token(c) == token) {
            return c;
        }
    }
    throw std::invalid_argument("unknown care level '" + std::string(token) + "'");
}

}  // namespace resilsim
