#ifndef DYADNET_RNG_HPP
#define DYADNET_RNG_HPP

#include <cstdint>

namespace dyadnet {

/// Master seed with deterministic stream derivation.
///
/// Derived stream r is mix64((master XOR r) + 0x9E3779B97F4A7C15), where
/// mix64 is the SplitMix64 avalanche. Nested derivation (grid cell index,
/// then replicate index) gives every Monte Carlo replicate its own stream,
/// so parallel and serial runs agree bit for bit.
struct Seed {
    std::uint64_t master = 0;

    Seed derive(std::uint64_t index) const;
};

/// SplitMix64: a 64-bit counter-based generator (Steele, Lea & Flood 2014).
/// Small state, platform-independent output, and cheap stream splitting via
/// Seed::derive make it the fixed generator for every sampling path here.
class SplitMix64 {
public:
    explicit SplitMix64(Seed seed) : state_(seed.master) {}

    std::uint64_t next();

    /// Uniform double in [0, 1), 53 random bits.
    double next_double();

    /// Uniform integer in [0, bound), unbiased (rejection sampling).
    std::uint64_t next_below(std::uint64_t bound);

    bool next_bool() { return (next() >> 63) != 0; }

private:
    std::uint64_t state_;
};

/// Exact Binomial(n, p) draw. Inversion of the CDF starting from the mode,
/// accumulating probability mass outward, so the expected cost is
/// O(sqrt(n p (1-p))) and no intermediate quantity under- or overflows.
std::int64_t binomial_draw(SplitMix64& rng, std::int64_t n, double p);

}  // namespace dyadnet

#endif  // DYADNET_RNG_HPP
