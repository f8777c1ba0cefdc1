#include "dyadnet/sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace dyadnet {

namespace {

std::uint64_t edge_key(std::int64_t n, std::int64_t from, std::int64_t to) {
    return static_cast<std::uint64_t>(from) * static_cast<std::uint64_t>(n) +
           static_cast<std::uint64_t>(to);
}

// Rank of pair (i, j), i < j, in the row-major enumeration of unordered
// pairs: offset(i) = i (n-1) - i (i-1) / 2.
std::int64_t pair_offset(std::int64_t i, std::int64_t n) {
    return i * (n - 1) - i * (i - 1) / 2;
}

std::pair<std::int64_t, std::int64_t> unrank_pair(std::int64_t rank, std::int64_t n) {
    // Quadratic-formula guess, then exact integer fixup.
    const double nd = static_cast<double>(n);
    const double disc = (2.0 * nd - 1.0) * (2.0 * nd - 1.0) - 8.0 * static_cast<double>(rank);
    std::int64_t i = static_cast<std::int64_t>((2.0 * nd - 1.0 - std::sqrt(std::max(disc, 0.0))) / 2.0);
    if (i < 0) i = 0;
    if (i > n - 2) i = n - 2;
    while (i > 0 && pair_offset(i, n) > rank) --i;
    while (i < n - 2 && pair_offset(i + 1, n) <= rank) ++i;
    const std::int64_t j = rank - pair_offset(i, n) + i + 1;
    return {i, j};
}

DyadCensus draw_census(SplitMix64& rng, const NaturalParams& params,
                       const ModelVariant& variant, std::int64_t n_vertices) {
    const DyadDistribution d = dyad_distribution(params, variant, n_vertices);
    const std::int64_t pairs = detail::dyad_count(n_vertices);

    // Conditional binomial chain == one multinomial draw.
    const std::int64_t n_null = binomial_draw(rng, pairs, d.p_null);
    const std::int64_t rest = pairs - n_null;
    const double p_rest = 2.0 * d.p_single + d.p_mutual;
    const std::int64_t n_asym =
        p_rest > 0.0 ? binomial_draw(rng, rest, 2.0 * d.p_single / p_rest) : rest;
    return DyadCensus{n_vertices, n_null, n_asym, rest - n_asym};
}

}  // namespace

void Network::validate() const {
    if (n_vertices < 0) throw std::invalid_argument("negative vertex count");
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges.size() * 2);
    for (const auto& [from, to] : edges) {
        if (from == to) throw std::invalid_argument("self-loop");
        if (from < 0 || to < 0 || from >= n_vertices || to >= n_vertices) {
            throw std::invalid_argument("edge endpoint out of range");
        }
        if (!seen.insert(edge_key(n_vertices, from, to)).second) {
            throw std::invalid_argument("duplicate edge");
        }
    }
}

DyadCensus sample_census(const NaturalParams& params, const ModelVariant& variant,
                         std::int64_t n_vertices, Seed seed) {
    SplitMix64 rng(seed);
    return draw_census(rng, params, variant, n_vertices);
}

Network sample_network(const NaturalParams& params, const ModelVariant& variant,
                       std::int64_t n_vertices, Seed seed) {
    SplitMix64 rng(seed);
    const DyadCensus c = draw_census(rng, params, variant, n_vertices);
    const std::int64_t pairs = detail::dyad_count(n_vertices);
    const std::int64_t k = c.n_asym + c.n_mutual;

    // Floyd's algorithm: k distinct pair ranks from [0, pairs), kept in
    // insertion order so the downstream draws are reproducible.
    std::vector<std::int64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(k));
    std::unordered_set<std::int64_t> in_sample;
    in_sample.reserve(static_cast<std::size_t>(k) * 2);
    for (std::int64_t v = pairs - k; v < pairs; ++v) {
        const std::int64_t t =
            static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(v) + 1));
        if (in_sample.insert(t).second) {
            chosen.push_back(t);
        } else {
            in_sample.insert(v);
            chosen.push_back(v);
        }
    }

    Network net;
    net.n_vertices = n_vertices;
    net.edges.reserve(static_cast<std::size_t>(c.s()));

    // Selection sampling: each chosen pair is mutual with probability
    // (mutuals left) / (pairs left); uniform over subsets of size n_mutual.
    std::int64_t mutual_left = c.n_mutual;
    std::int64_t total_left = k;
    for (const std::int64_t rank : chosen) {
        const auto [i, j] = unrank_pair(rank, n_vertices);
        const bool mutual =
            mutual_left > 0 &&
            rng.next_below(static_cast<std::uint64_t>(total_left)) <
                static_cast<std::uint64_t>(mutual_left);
        if (mutual) {
            net.edges.emplace_back(i, j);
            net.edges.emplace_back(j, i);
            --mutual_left;
        } else if (rng.next_bool()) {
            net.edges.emplace_back(i, j);
        } else {
            net.edges.emplace_back(j, i);
        }
        --total_left;
    }
    return net;
}

DyadCensus census(const Network& network) {
    const std::int64_t n = network.n_vertices;
    std::unordered_set<std::uint64_t> present;
    present.reserve(network.edges.size() * 2);
    for (const auto& [from, to] : network.edges) {
        present.insert(edge_key(n, from, to));
    }

    std::int64_t n_mutual = 0;
    std::int64_t n_asym = 0;
    for (const auto& [from, to] : network.edges) {
        if (present.count(edge_key(n, to, from))) {
            ++n_mutual;  // counted once per direction; halved below
        } else {
            ++n_asym;
        }
    }
    n_mutual /= 2;
    return DyadCensus{n, detail::dyad_count(n) - n_asym - n_mutual, n_asym, n_mutual};
}

std::vector<std::int64_t> out_degrees(const Network& network) {
    std::vector<std::int64_t> deg(static_cast<std::size_t>(network.n_vertices), 0);
    for (const auto& [from, to] : network.edges) {
        (void)to;
        ++deg[static_cast<std::size_t>(from)];
    }
    return deg;
}

}  // namespace dyadnet
