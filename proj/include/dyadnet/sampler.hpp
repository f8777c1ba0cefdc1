#ifndef DYADNET_SAMPLER_HPP
#define DYADNET_SAMPLER_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "dyadnet/model.hpp"
#include "dyadnet/rng.hpp"

namespace dyadnet {

/// Directed simple graph on n_vertices labeled vertices (0-based ids),
/// sparse edge-set representation. No self-loops, no duplicate edges.
struct Network {
    std::int64_t n_vertices = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> edges;

    /// Throws std::invalid_argument on self-loops, out-of-range endpoints,
    /// or duplicate edges.
    void validate() const;
};

/// Counts of dyad states; the minimal sufficient summary of a network under
/// dyad-independent models. s = n_asym + 2 n_mutual, m = n_mutual.
struct DyadCensus {
    std::int64_t n_vertices = 0;
    std::int64_t n_null = 0;
    std::int64_t n_asym = 0;
    std::int64_t n_mutual = 0;

    std::int64_t s() const { return n_asym + 2 * n_mutual; }
    std::int64_t m() const { return n_mutual; }
    std::int64_t dyads() const { return n_null + n_asym + n_mutual; }
};

/// Draw the dyad census directly: one multinomial with C(N_v,2) trials over
/// the collapsed states (null, asymmetric, mutual). Distributionally
/// identical to simulating every dyad, at O(counts) cost.
DyadCensus sample_census(const NaturalParams& params, const ModelVariant& variant,
                         std::int64_t n_vertices, Seed seed);

/// Draw a full network: sample a census, then place the non-null dyads on a
/// uniform random subset of vertex pairs (Floyd sampling of pair ranks plus
/// unranking), assigning direction uniformly for asymmetric dyads. Expected
/// cost O(N_v + edges); the C(N_v,2) dyads are never materialized.
///
/// census(sample_network(p, v, n, s)) equals sample_census(p, v, n, s):
/// both consume the same stream prefix.
Network sample_network(const NaturalParams& params, const ModelVariant& variant,
                       std::int64_t n_vertices, Seed seed);

/// Exact census of a network; single pass with a paired-edge lookup.
DyadCensus census(const Network& network);

/// Out-degree of every vertex.
std::vector<std::int64_t> out_degrees(const Network& network);

}  // namespace dyadnet

#endif  // DYADNET_SAMPLER_HPP
