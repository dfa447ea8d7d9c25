#include <cmath>
#include <vector>

#include "doctest.h"
#include "resilsim/rng.hpp"
#include "support.hpp"

using namespace resilsim;

TEST_SUITE("rng") {

TEST_CASE("identical (seed, run, key) triples replay identical draws") {
    RngStream a(42, 3, stream_key(StreamDomain::test, 17));
    RngStream b(42, 3, stream_key(StreamDomain::test, 17));
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("distinct run indices draw distinct sequences") {
    RngStream a(42, 0, stream_key(StreamDomain::test, 17));
    RngStream b(42, 1, stream_key(StreamDomain::test, 17));
    int equal = 0;
    for (int i = 0; i < 64; ++i) {
        equal += a.next_u64() == b.next_u64();
    }
    CHECK(equal == 0);
}

TEST_CASE("distinct steps of one stream are decoupled") {
    RngStream a(7, 0, stream_key(StreamDomain::test, 1), 10);
    RngStream b(7, 0, stream_key(StreamDomain::test, 1), 11);
    CHECK(a.next_u64() != b.next_u64());
}

TEST_CASE("first draws of many keys pass a chi-square uniformity test") {
    std::vector<double> first;
    for (std::uint64_t key = 0; key < 10000; ++key) {
        RngStream stream(2024, 0, stream_key(StreamDomain::test, key));
        first.push_back(stream.uniform01());
    }
    // 20 equiprobable bins, 19 degrees of freedom, alpha = 0.01.
    const double critical = 36.191;
    CHECK(testsupport::chi_square_uniform(first, 20) < critical);
}

TEST_CASE("uniform01 lies in [0, 1)") {
    RngStream stream(1, 0, stream_key(StreamDomain::test, 0));
    for (int i = 0; i < 10000; ++i) {
        const double u = stream.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("poisson matches its mean in both sampling regimes") {
    RngStream stream(99, 0, stream_key(StreamDomain::test, 5));
    const int n = 100000;
    for (const double mean : {1.98, 50.0}) {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = static_cast<double>(stream.poisson(mean));
            sum += x;
            sum_sq += x * x;
        }
        const double sample_mean = sum / n;
        const double sample_var = sum_sq / n - sample_mean * sample_mean;
        CHECK(sample_mean == doctest::Approx(mean).epsilon(0.02));
        CHECK(sample_var == doctest::Approx(mean).epsilon(0.05));
    }
    CHECK(stream.poisson(0.0) == 0);
    CHECK(stream.poisson(-1.0) == 0);
}

TEST_CASE("bernoulli handles the degenerate probabilities") {
    RngStream stream(5, 0, stream_key(StreamDomain::test, 2));
    for (int i = 0; i < 100; ++i) {
        CHECK_FALSE(stream.bernoulli(0.0));
        CHECK(stream.bernoulli(1.0));
    }
}

TEST_CASE("uniform_below stays within the bound") {
    RngStream stream(5, 0, stream_key(StreamDomain::test, 3));
    for (int i = 0; i < 10000; ++i) {
        CHECK(stream.uniform_below(7) < 7);
    }
    CHECK_THROWS_AS(stream.uniform_below(0), std::invalid_argument);
}

TEST_CASE("categorical follows the weights") {
    RngStream stream(5, 0, stream_key(StreamDomain::test, 4));
    const std::array<double, 3> degenerate = {0.0, 1.0, 0.0};
    for (int i = 0; i < 100; ++i) {
        CHECK(stream.categorical(degenerate) == 1);
    }
    const std::array<double, 2> even = {0.5, 0.5};
    int ones = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        ones += stream.categorical(even) == 1;
    }
    CHECK(static_cast<double>(ones) / n == doctest::Approx(0.5).epsilon(0.01));
    const std::array<double, 2> none = {0.0, 0.0};
    CHECK_THROWS_AS(stream.categorical(none), std::invalid_argument);
}

TEST_CASE("stream keys separate domains and reject oversized ordinals") {
    CHECK(stream_key(StreamDomain::patient, 1) !=
          stream_key(StreamDomain::population, 1));
    CHECK_THROWS_AS(stream_key(StreamDomain::patient, 1ull << 48),
                    std::invalid_argument);
}

}  // TEST_SUITE
