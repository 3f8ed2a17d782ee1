#pragma once

#include <cstdint>
#include <vector>

namespace xlab {

/// Counter-based pseudo-random generator (splitmix64 core).
///
/// The n-th draw is a pure function of (seed, n), so identical seed plus
/// identical call sequence reproduces the stream exactly, and derive()
/// builds statistically independent child streams from the root seed and
/// up to three stream ids without consuming any draws. Parallel trials
/// derive their streams from (seed, trial index) and never need to
/// sequence against each other.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform();

    /// Standard normal via Box-Muller (two draws per call).
    double normal();

    /// Uniform integer in [0, n). Unbiased; n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// Independent child stream keyed by (seed, a, b, c).
    Rng derive(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const;

    /// Fisher-Yates permutation of {0, ..., n-1}.
    std::vector<std::size_t> permutation(std::size_t n);

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace xlab
