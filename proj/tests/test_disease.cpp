#include <array>

#include "doctest.h"
#include "resilsim/disease.hpp"
#include "resilsim/scenario.hpp"
#include "resilsim/world.hpp"
#include "support.hpp"

using namespace resilsim;

namespace {

DiseaseSpec uniform_spec(double mean_days, double q_recovery, double q_worsening,
                         double q_death) {
    DiseaseSpec spec;
    spec.id = "toy";
    for (int s = 0; s < kIllStates; ++s) {
        for (int c = 0; c < kCareLevels; ++c) {
            spec.mean_days[s][c] = mean_days;
            spec.outcomes[s][c] = OutcomeShares{q_recovery, q_worsening, q_death};
        }
    }
    return spec;
}

}  // namespace

TEST_SUITE("disease") {

TEST_CASE("required care climbs with severity") {
    CHECK(required_care(HealthState::very_mild) == CareLevel::no_followup);
    CHECK(required_care(HealthState::mild) == CareLevel::mhealth);
    CHECK(required_care(HealthState::moderate) == CareLevel::in_person);
    CHECK(required_care(HealthState::severe) == CareLevel::general_bed);
    CHECK(required_care(HealthState::critical) == CareLevel::icu);
    CHECK_THROWS_AS(required_care(HealthState::healthy), std::invalid_argument);
    CHECK_THROWS_AS(required_care(HealthState::death), std::invalid_argument);
}

TEST_CASE("transition probabilities follow the geometric-sojourn split") {
    const DiseaseSpec spec = uniform_spec(10.0, 0.90, 0.08, 0.02);
    const TransitionProbs probs =
        derive_transition_probs(spec, HealthState::severe, CareLevel::general_bed);
    CHECK(probs.stay == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(probs.worsening == doctest::Approx(0.008).epsilon(1e-12));
    CHECK(probs.recovery == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(probs.death == doctest::Approx(0.002).epsilon(1e-12));
    CHECK(probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a one-day sojourn always exits") {
    const DiseaseSpec spec = uniform_spec(1.0, 0.5, 0.3, 0.2);
    const TransitionProbs probs =
        derive_transition_probs(spec, HealthState::mild, CareLevel::mhealth);
    CHECK(probs.stay == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("absorbing states never move") {
    const DiseaseSpec spec = uniform_spec(5.0, 1.0, 0.0, 0.0);
    CHECK(derive_transition_probs(spec, HealthState::healthy, CareLevel::no_followup) ==
          TransitionProbs{1.0, 0.0, 0.0, 0.0});
    CHECK(derive_transition_probs(spec, HealthState::death, CareLevel::no_followup) ==
          TransitionProbs{1.0, 0.0, 0.0, 0.0});
}

TEST_CASE("sub-day sojourns and over-serving are rejected") {
    DiseaseSpec spec = uniform_spec(5.0, 1.0, 0.0, 0.0);
    spec.mean_days[ill_index(HealthState::mild)][static_cast<int>(CareLevel::mhealth)] = 0.5;
    CHECK_THROWS_AS(derive_transition_probs(spec, HealthState::mild, CareLevel::mhealth),
                    std::invalid_argument);
    CHECK_THROWS_AS(derive_transition_probs(spec, HealthState::mild, CareLevel::icu),
                    std::invalid_argument);
}

TEST_CASE("quality endpoints are exact and the midpoint is quadratic") {
    const TransitionProbs nominal{0.9, 0.1, 0.0, 0.0};
    const TransitionProbs degraded{0.5, 0.5, 0.0, 0.0};
    CHECK(apply_quality(nominal, degraded, 1.0) == nominal);
    CHECK(apply_quality(nominal, degraded, 0.0) == degraded);
    // 0.5 + 0.5^2 * (0.9 - 0.5) = 0.6; the sum stays 1, so no renormalization.
    const TransitionProbs mid = apply_quality(nominal, degraded, 0.5);
    CHECK(mid.stay == doctest::Approx(0.6).epsilon(1e-12));
    CHECK_THROWS_AS(apply_quality(nominal, degraded, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(apply_quality(nominal, degraded, 1.1), std::invalid_argument);
}

TEST_CASE("interpolated distributions stay normalized and bounded") {
    RngStream rng(11, 0, stream_key(StreamDomain::test, 1));
    for (int trial = 0; trial < 1000; ++trial) {
        const auto random_probs = [&rng] {
            std::array<double, 4> raw;
            double total = 0.0;
            for (double& w : raw) {
                w = rng.uniform01() + 1e-9;
                total += w;
            }
            return TransitionProbs{raw[0] / total, raw[1] / total, raw[2] / total,
                                   raw[3] / total};
        };
        const TransitionProbs nominal = random_probs();
        const TransitionProbs degraded = random_probs();
        const double q = rng.uniform01();
        const TransitionProbs mixed = apply_quality(nominal, degraded, q);
        REQUIRE(mixed.sum() == doctest::Approx(1.0).epsilon(1e-9));
        for (double p : {mixed.stay, mixed.worsening, mixed.recovery, mixed.death}) {
            REQUIRE(p >= 0.0);
            REQUIRE(p <= 1.0);
        }
    }
}

TEST_CASE("death probability declines monotonically with quality") {
    const TransitionProbs nominal{0.90, 0.05, 0.04, 0.01};
    const TransitionProbs degraded{0.70, 0.10, 0.05, 0.15};
    double previous = 1.0;
    for (int i = 0; i <= 100; ++i) {
        const double q = i / 100.0;
        const double death = apply_quality(nominal, degraded, q).death;
        CHECK(death <= previous + 1e-12);
        previous = death;
    }
}

TEST_CASE("absorbed patients are left untouched") {
    const DiseaseSpec spec = uniform_spec(5.0, 0.5, 0.3, 0.2);
    RngStream rng(3, 0, stream_key(StreamDomain::test, 9));
    Patient dead;
    dead.state = HealthState::death;
    const Patient before = dead;
    patient_step(dead, spec, 1.0, 10, rng);
    CHECK(dead == before);
}

TEST_CASE("worsening from critical is death") {
    DiseaseSpec spec = uniform_spec(1.0, 0.0, 1.0, 0.0);  // always worsens
    RngStream rng(3, 0, stream_key(StreamDomain::test, 10));
    Patient patient;
    patient.state = HealthState::critical;
    patient.care_received = CareLevel::no_followup;
    patient_step(patient, spec, 1.0, 1, rng);
    CHECK(patient.state == HealthState::death);
    CHECK(patient.state_entry_day == 1);
}

TEST_CASE("sojourn times are geometric with the configured mean") {
    const DiseaseSpec spec = uniform_spec(10.0, 0.90, 0.08, 0.02);
    RngStream rng(17, 0, stream_key(StreamDomain::test, 11));
    const int lifetimes = 100000;
    long long total_days = 0;
    long long recoveries = 0;
    long long worsenings = 0;
    long long deaths = 0;
    for (int i = 0; i < lifetimes; ++i) {
        Patient patient;
        patient.state = HealthState::severe;
        patient.care_received = CareLevel::general_bed;
        int days = 0;
        while (patient.state == HealthState::severe) {
            ++days;
            patient_step(patient, spec, 1.0, days, rng);
        }
        total_days += days;
        recoveries += patient.state == HealthState::healthy;
        deaths += patient.state == HealthState::death;
        worsenings += patient.state == HealthState::critical;
    }
    const double mean_sojourn = static_cast<double>(total_days) / lifetimes;
    CHECK(mean_sojourn == doctest::Approx(10.0).epsilon(0.02));
    // Exit splits converge to the outcome proportions (3 sigma).
    const auto check_share = [&](long long count, double expected) {
        const double sigma =
            std::sqrt(expected * (1.0 - expected) / lifetimes);
        CHECK(std::fabs(static_cast<double>(count) / lifetimes - expected) <=
              3.0 * sigma);
    };
    check_share(recoveries, 0.90);
    check_share(worsenings, 0.08);
    check_share(deaths, 0.02);
}

TEST_CASE("ICU care of a critical low-severity patient loses one in ten") {
    const ScenarioConfig scenario =
        load_scenario_file(testsupport::fixture_path("usecase.json"));
    const World world = build_world(scenario, 1, 0);
    const DiseaseSpec* low = nullptr;
    for (const DiseaseSpec& spec : world.diseases) {
        if (spec.id == "respv_low") {
            low = &spec;
        }
    }
    REQUIRE(low != nullptr);
    RngStream rng(23, 0, stream_key(StreamDomain::test, 12));
    const int lifetimes = 100000;
    long long deaths = 0;
    for (int i = 0; i < lifetimes; ++i) {
        Patient patient;
        patient.state = HealthState::critical;
        patient.care_received = CareLevel::icu;
        int day = 0;
        while (patient.state == HealthState::critical) {
            patient_step(patient, *low, 1.0, ++day, rng);
        }
        deaths += patient.state == HealthState::death;
    }
    const double share = static_cast<double>(deaths) / lifetimes;
    const double sigma = std::sqrt(0.10 * 0.90 / lifetimes);
    CHECK(std::fabs(share - 0.10) <= 3.0 * sigma);
}

}  // TEST_SUITE
