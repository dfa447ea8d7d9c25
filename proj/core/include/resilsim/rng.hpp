#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace resilsim {

/// 64-bit finalizing mixer (SplitMix64 increment-and-mix step).
std::uint64_t splitmix64(std::uint64_t x);

/// Agent families with mutually independent random substreams.
enum class StreamDomain : std::uint16_t {
    population = 1,
    patient = 2,
    hospital = 3,
    it_node = 4,
    attacker = 5,
    patient_init = 6,
    test = 15,
};

/// Packs (domain, ordinal) into the 64-bit stream key consumed by RngStream.
/// Ordinals above 2^48 - 1 are rejected.
std::uint64_t stream_key(StreamDomain domain, std::uint64_t ordinal);

/// Counter-based random stream (Philox 4x32, 10 rounds).
///
/// The whole generator state is the tuple (master_seed, run_index,
/// stream_key, step, draw counter): identical tuples replay identical draw
/// sequences, distinct tuples are statistically independent. Draws never
/// depend on how many values other streams consumed, so per-agent and
/// per-run sequences stay stable under parallel execution and under
/// reordering of unrelated agents.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint32_t run_index,
              std::uint64_t key, std::uint32_t step = 0);

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    /// Uniform in [0, 1), 53 random bits.
    double uniform01();

    bool bernoulli(double p);

    /// Uniform integer in [0, bound), bound > 0.
    std::uint64_t uniform_below(std::uint64_t bound);

    /// Poisson draw, exact for any mean >= 0.
    long long poisson(double mean);

    /// Index drawn proportionally to non-negative weights (their sum must be
    /// positive).
    std::size_t categorical(std::span<const double> weights);

private:
    void refill();

    std::array<std::uint32_t, 2> cipher_key_;
    std::uint64_t stream_key_;
    std::uint32_t step_;
    std::uint32_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    unsigned block_pos_ = 4;
};

/// Deterministic substream for a (seed, run, key) triple.
RngStream rng_substream(std::uint64_t master_seed, std::uint32_t run_index,
                        std::uint64_t key);

}  // namespace resilsim
