#include "dyadnet/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace dyadnet {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

Seed Seed::derive(std::uint64_t index) const {
    return Seed{mix64((master ^ index) + kGolden)};
}

std::uint64_t SplitMix64::next() {
    state_ += kGolden;
    return mix64(state_);
}

double SplitMix64::next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix64::next_below(std::uint64_t bound) {
    if (bound == 0) {
        throw std::invalid_argument("next_below requires bound > 0");
    }
    // Reject the low partial block so every residue is equally likely.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = next();
        if (r >= threshold) return r % bound;
    }
}

std::int64_t binomial_draw(SplitMix64& rng, std::int64_t n, double p) {
    if (n < 0) throw std::invalid_argument("binomial_draw requires n >= 0");
    if (n == 0 || p <= 0.0) return 0;
    if (p >= 1.0) return n;

    // Work with q = min(p, 1-p) and flip at the end.
    const bool flipped = p > 0.5;
    const double q = flipped ? 1.0 - p : p;
    const double nd = static_cast<double>(n);

    const std::int64_t mode = static_cast<std::int64_t>((nd + 1.0) * q);
    const double md = static_cast<double>(mode);
    const double log_pmf_mode = std::lgamma(nd + 1.0) - std::lgamma(md + 1.0) -
                                std::lgamma(nd - md + 1.0) + md * std::log(q) +
                                (nd - md) * std::log1p(-q);

    const double u = rng.next_double();
    const double odds = q / (1.0 - q);

    double pmf_up = std::exp(log_pmf_mode);
    double pmf_dn = pmf_up;
    double cum = pmf_up;
    std::int64_t k_up = mode;
    std::int64_t k_dn = mode;
    std::int64_t result = mode;

    while (cum <= u) {
        bool advanced = false;
        if (k_up < n) {
            pmf_up *= (static_cast<double>(n - k_up) / static_cast<double>(k_up + 1)) * odds;
            ++k_up;
            cum += pmf_up;
            advanced = true;
            if (cum > u) {
                result = k_up;
                break;
            }
        }
        if (k_dn > 0) {
            pmf_dn *= (static_cast<double>(k_dn) / (static_cast<double>(n - k_dn) + 1.0)) / odds;
            --k_dn;
            cum += pmf_dn;
            advanced = true;
            if (cum > u) {
                result = k_dn;
                break;
            }
        }
        if (!advanced) break;  // float leakage; u within one ulp of 1
    }

    return flipped ? n - result : result;
}

}  // namespace dyadnet
