#include <cmath>

#include "doctest.h"
#include "resilsim/epidemics.hpp"
#include "support.hpp"

using namespace resilsim;

TEST_SUITE("epidemics") {

TEST_CASE("no infectious individuals means no movement") {
    RngStream rng(1, 0, stream_key(StreamDomain::test, 1));
    const SirStepResult result = sir_step(1000, 0, 0, {5.0, 5.0}, rng);
    CHECK(result == SirStepResult{1000, 0, 0, 0});
}

TEST_CASE("sir_step conserves the population for arbitrary states") {
    RngStream rng(2, 0, stream_key(StreamDomain::test, 2));
    for (int trial = 0; trial < 500; ++trial) {
        const long long s = static_cast<long long>(rng.uniform_below(5000));
        const long long i = static_cast<long long>(rng.uniform_below(2000));
        const long long r = static_cast<long long>(rng.uniform_below(3000));
        if (s + i + r == 0) {
            continue;
        }
        const SirParams params{rng.uniform01() * 2.0, rng.uniform01()};
        const SirStepResult next = sir_step(s, i, r, params, rng);
        REQUIRE(next.susceptible + next.infected + next.recovered == s + i + r);
        REQUIRE(next.susceptible >= 0);
        REQUIRE(next.infected >= 0);
        REQUIRE(next.recovered >= 0);
        REQUIRE(next.new_infections <= s);
    }
}

TEST_CASE("infection and recovery rates match their Poisson means") {
    RngStream rng(3, 0, stream_key(StreamDomain::test, 3));
    const int n = 100000;
    double infections = 0.0;
    double recoveries = 0.0;
    for (int k = 0; k < n; ++k) {
        const SirStepResult step = sir_step(990, 10, 0, {0.2, 0.1}, rng);
        infections += static_cast<double>(step.new_infections);
        recoveries += static_cast<double>(step.recovered);
    }
    // beta*S*I/N = 0.2*990*10/1000 = 1.98; gamma*I = 1.0
    CHECK(infections / n == doctest::Approx(1.98).epsilon(0.02));
    CHECK(recoveries / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("draws are capped by the source compartments") {
    RngStream rng(4, 0, stream_key(StreamDomain::test, 4));
    for (int k = 0; k < 1000; ++k) {
        const SirStepResult step = sir_step(3, 50, 0, {50.0, 30.0}, rng);
        REQUIRE(step.new_infections <= 3);
        REQUIRE(step.susceptible >= 0);
        REQUIRE(step.infected >= 0);
    }
}

TEST_CASE("baseline demand is Poisson in size and incidence") {
    RngStream rng(5, 0, stream_key(StreamDomain::test, 5));
    CHECK(baseline_demand(1000000, 0.0, rng) == 0);
    const int n = 100000;
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
        total += static_cast<double>(baseline_demand(40000, 5.0, rng));
    }
    CHECK(total / n == doctest::Approx(2.0).epsilon(0.02));
    CHECK_THROWS_AS(baseline_demand(1000, -1.0, rng), std::invalid_argument);
}

TEST_CASE("identical stream state yields identical demand") {
    RngStream a(6, 0, stream_key(StreamDomain::test, 6));
    RngStream b(6, 0, stream_key(StreamDomain::test, 6));
    for (int k = 0; k < 100; ++k) {
        CHECK(baseline_demand(40000, 5.0, a) == baseline_demand(40000, 5.0, b));
    }
}

TEST_CASE("mass-casualty incidents trigger only on their day") {
    Population pop;
    pop.id = "p";
    pop.size = 1000;
    MciEvent event;
    event.start_day = 50;
    event.casualty_count = 100;
    event.severity = {0.0, 0.0, 0.0, 1.0, 0.0};  // everyone severe
    pop.mci_events.push_back(event);
    RngStream rng(7, 0, stream_key(StreamDomain::test, 7));
    CHECK(mci_surge(pop, 49, rng).empty());
    const auto arrivals = mci_surge(pop, 50, rng);
    REQUIRE(arrivals.size() == 1);
    CHECK(arrivals[0].state == HealthState::severe);
    CHECK(arrivals[0].count == 100);
}

TEST_CASE("mass-casualty severities follow the distribution") {
    Population pop;
    pop.id = "p";
    pop.size = 1000;
    MciEvent event;
    event.start_day = 0;
    event.casualty_count = 100000;
    event.severity = {0.2, 0.2, 0.2, 0.2, 0.2};
    pop.mci_events.push_back(event);
    RngStream rng(8, 0, stream_key(StreamDomain::test, 8));
    const auto arrivals = mci_surge(pop, 0, rng);
    REQUIRE(arrivals.size() == 5);
    long long total = 0;
    for (const MciArrival& arrival : arrivals) {
        CHECK(static_cast<double>(arrival.count) ==
              doctest::Approx(20000.0).epsilon(0.01));
        total += arrival.count;
    }
    CHECK(total == 100000);
}

TEST_CASE("routing follows the configured distribution") {
    Population pop;
    pop.id = "p";
    pop.size = 1000;
    pop.routing = {1.0, 0.0};
    RngStream rng(9, 0, stream_key(StreamDomain::test, 9));
    for (int k = 0; k < 200; ++k) {
        CHECK(route_new_patient(pop, rng) == 0);
    }
    pop.routing = {0.5, 0.5};
    const int n = 100000;
    int second = 0;
    for (int k = 0; k < n; ++k) {
        second += route_new_patient(pop, rng) == 1;
    }
    CHECK(static_cast<double>(second) / n == doctest::Approx(0.5).epsilon(0.01));
}

}  // TEST_SUITE
