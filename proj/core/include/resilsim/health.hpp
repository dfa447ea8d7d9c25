#pragma once

#include <cstdint>
#include <string_view>

namespace resilsim {

/// Patient severity ladder; healthy and death are absorbing.
enum class HealthState : std::uint8_t {
    healthy = 0,
    very_mild = 1,
    mild = 2,
    moderate = 3,
    severe = 4,
    critical = 5,
    death = 6,
};

/// Care intensity ladder; no_followup consumes no hospital service.
enum class CareLevel : std::uint8_t {
    no_followup = 0,
    mhealth = 1,
    in_person = 2,
    general_bed = 3,
    icu = 4,
};

inline constexpr int kIllStates = 5;      // very_mild .. critical
inline constexpr int kCareLevels = 5;     // no_followup .. icu
inline constexpr int kServiceLevels = 4;  // mhealth .. icu

constexpr bool is_ill(HealthState h) {
    return h != HealthState::healthy && h != HealthState::death;
}

/// very_mild -> 0 ... critical -> 4. Only valid for ill states.
constexpr int ill_index(HealthState h) {
    return static_cast<int>(h) - 1;
}

constexpr HealthState ill_state(int index) {
    return static_cast<HealthState>(index + 1);
}

/// Worsening target; the ladder has no state above critical, so a critical
/// patient that worsens dies.
constexpr HealthState next_worse(HealthState h) {
    return h == HealthState::critical
               ? HealthState::death
               : static_cast<HealthState>(static_cast<int>(h) + 1);
}

/// mhealth -> 0 ... icu -> 3. Only valid for actual services.
constexpr int service_index(CareLevel c) {
    return static_cast<int>(c) - 1;
}

constexpr CareLevel service_level(int index) {
    return static_cast<CareLevel>(index + 1);
}

constexpr CareLevel lower_care(CareLevel c) {
    return c == CareLevel::no_followup
               ? CareLevel::no_followup
               : static_cast<CareLevel>(static_cast<int>(c) - 1);
}

/// Care level an ill state calls for. Throws std::invalid_argument for
/// healthy and death.
CareLevel required_care(HealthState h);

std::string_view to_token(HealthState h);
std::string_view to_token(CareLevel c);
HealthState health_state_from_token(std::string_view token);
CareLevel care_level_from_token(std::string_view token);

}  // namespace resilsim
