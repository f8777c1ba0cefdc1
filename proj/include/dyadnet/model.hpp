#ifndef DYADNET_MODEL_HPP
#define DYADNET_MODEL_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dyadnet {

/// Thrown when an operation does not support the requested model variant
/// (e.g. fitting the sparse-density model with reciprocity enabled).
class UnsupportedVariant : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Natural parameters (alpha, beta) on the log-odds scale.
///
/// alpha governs edge propensity, beta the tendency of an edge (i,j) to be
/// reciprocated by (j,i). Models without reciprocity keep beta at exactly 0.
/// Construction rejects non-finite values and values outside [-50, 50];
/// all downstream computation is done in log space, so this bound is about
/// keeping the parameters in a regime where estimates are meaningful, not
/// about exp() overflow.
struct NaturalParams {
    double alpha;
    double beta;

    explicit NaturalParams(double alpha_, double beta_ = 0.0);

    static constexpr double kDomainBound = 50.0;
};

/// Offset regime: how the per-dyad exponents shift with network size N_v.
///
///   Baseline          -> (alpha, beta)                   constant density
///   SparseDensity     -> (alpha - log N_v, beta)          constant mean degree
///   SparseReciprocity -> (alpha - log N_v, beta + log N_v) constant mean degree
///                                                          and per-vertex reciprocity
///
/// The shifts are pure reparameterisations of the same dyad family.
enum class OffsetRegime {
    Baseline,
    SparseDensity,
    SparseReciprocity,
};

/// A model variant: offset regime plus whether the reciprocity parameter is
/// active. SparseReciprocity requires reciprocity; SparseDensity with
/// reciprocity is constructible for diagnostics (its Fisher matrix shows why
/// beta is not estimable under it) but is rejected by fitting and CI code.
class ModelVariant {
public:
    ModelVariant() = default;  // baseline with reciprocity

    static ModelVariant baseline(bool reciprocity = true);
    static ModelVariant sparse_density();
    static ModelVariant sparse_density_with_reciprocity();
    static ModelVariant sparse_reciprocity();

    OffsetRegime regime() const { return regime_; }
    bool reciprocity() const { return reciprocity_; }

    /// Additive offsets applied to (alpha, beta) to obtain the effective
    /// per-dyad exponents at network size n_vertices.
    double alpha_offset(std::int64_t n_vertices) const;
    double beta_offset(std::int64_t n_vertices) const;

    bool is_sparse() const { return regime_ != OffsetRegime::Baseline; }

    std::string name() const;
    static ModelVariant parse(const std::string& name, bool reciprocity);

    bool operator==(const ModelVariant&) const = default;

private:
    ModelVariant(OffsetRegime regime, bool reciprocity);

    OffsetRegime regime_ = OffsetRegime::Baseline;
    bool reciprocity_ = true;
};

/// Distribution of a single dyad over its four states: empty, one asymmetric
/// edge in either direction (p_single each), or mutual.
struct DyadDistribution {
    double p_null;
    double p_single;
    double p_mutual;

    double sum() const { return p_null + 2.0 * p_single + p_mutual; }
};

/// Per-vertex mean-value targets: E[s(Y)]/N_v and E[m(Y)]/N_v, where s is
/// the directed edge count and m the number of mutual dyads.
struct MeanValueTargets {
    double edges_per_vertex;
    double mutuals_per_vertex;

    MeanValueTargets(double edges, double mutuals);
};

/// Symmetric 2x2 matrix [[aa, ab], [ab, bb]] used for Fisher information and
/// covariance values. Scalar (one-parameter) quantities live in aa with the
/// remaining entries zero.
struct InfoMatrix {
    double aa = 0.0;
    double ab = 0.0;
    double bb = 0.0;

    double det() const { return aa * bb - ab * ab; }
    InfoMatrix inverse() const;  // requires det() != 0
};

/// Expected sufficient statistics E[s], E[m] of a whole network.
struct SuffStats {
    double s;
    double m;
};

/// Exact single-dyad distribution under the given variant at size n_vertices.
/// Probabilities are proportional to (1, A', A', B') where A' and B' are
/// exp of the effective exponents; computed with log-sum-exp.
DyadDistribution dyad_distribution(const NaturalParams& params,
                                   const ModelVariant& variant,
                                   std::int64_t n_vertices);

/// Log normalizing constant psi = C(N_v,2) * log(1 + 2A' + B').
double log_normalizer(const NaturalParams& params, const ModelVariant& variant,
                      std::int64_t n_vertices);

/// E[s] and E[m]; the gradient of log_normalizer in (alpha, beta).
SuffStats expected_stats(const NaturalParams& params, const ModelVariant& variant,
                         std::int64_t n_vertices);

/// Covariance of the dyad-averaged statistics (s/C, m/C) with C = C(N_v,2).
/// Scaling by C^2 recovers Cov(s, m). Exact at finite N_v.
InfoMatrix stat_covariance(const NaturalParams& params, const ModelVariant& variant,
                           std::int64_t n_vertices);

/// Fisher information in (alpha, beta); the Hessian of log_normalizer.
/// For a model without reciprocity this is the scalar
/// N_v(N_v-1) p(1-p), p = A'/(1+A'), stored in the aa entry.
InfoMatrix fisher_information(const NaturalParams& params, const ModelVariant& variant,
                              std::int64_t n_vertices);

/// Limit covariance of sqrt(N_v) (theta_hat - theta_0) under the sparse
/// variants: exp(-alpha) for SparseDensity (scalar), and
/// exp(-alpha) [[1, -2], [-2, 4 + 2 exp(-alpha-beta)]] for SparseReciprocity.
/// The Baseline regime normalizes by C(N_v,2)^{1/2} instead and is rejected.
InfoMatrix asymptotic_covariance(const NaturalParams& params,
                                 const ModelVariant& variant);

namespace detail {

/// Effective per-dyad exponents after variant offsets.
struct EffectiveExponents {
    double log_a;  // log A' = alpha + alpha_offset
    double log_b;  // log B' = 2*(alpha + alpha_offset) + beta + beta_offset
};

EffectiveExponents effective_exponents(const NaturalParams& params,
                                       const ModelVariant& variant,
                                       std::int64_t n_vertices);

void require_dyads(std::int64_t n_vertices);
std::int64_t dyad_count(std::int64_t n_vertices);

}  // namespace detail

}  // namespace dyadnet

#endif  // DYADNET_MODEL_HPP
