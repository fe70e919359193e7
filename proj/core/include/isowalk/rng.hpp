#pragma once

#include <cstdint>
#include <limits>

namespace isowalk {

/// xoshiro256** (Blackman and Vigna), state filled from a SplitMix64 sequence.
///
/// Streams are split deterministically: stream(seed, i) seeds a fresh generator
/// from mix(seed) ^ mix(i + 1) where mix is the SplitMix64 finalizer, so the
/// trial -> stream mapping is a pure function of (seed, i).
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed);

    static Rng stream(std::uint64_t seed, std::uint64_t index);
    /// Seed of a derived stream family (e.g. one per search phase).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t tag);

    std::uint64_t next();
    std::uint64_t operator()() { return next(); }
    /// Uniform in [0, n) without modulo bias; n must be positive.
    std::uint64_t below(std::uint64_t n);
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();

    static constexpr std::uint64_t min() { return 0; }
    static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

private:
    std::uint64_t s_[4];
};

std::uint64_t splitmix64_mix(std::uint64_t z);

}  // namespace isowalk
