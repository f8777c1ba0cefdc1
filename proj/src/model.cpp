#include "dyadnet/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dyadnet {

NaturalParams::NaturalParams(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw std::domain_error("natural parameters must be finite");
    }
    if (std::abs(alpha) > kDomainBound || std::abs(beta) > kDomainBound) {
        throw std::domain_error("natural parameters outside [-50, 50]");
    }
}

MeanValueTargets::MeanValueTargets(double edges, double mutuals)
    : edges_per_vertex(edges), mutuals_per_vertex(mutuals) {
    if (!std::isfinite(edges) || !std::isfinite(mutuals) || edges < 0.0 || mutuals < 0.0) {
        throw std::domain_error("mean-value targets must be finite and non-negative");
    }
    if (mutuals > edges / 2.0) {
        // each mutual dyad contributes two edges
        throw std::domain_error("mutuals_per_vertex cannot exceed edges_per_vertex / 2");
    }
}

ModelVariant::ModelVariant(OffsetRegime regime, bool reciprocity)
    : regime_(regime), reciprocity_(reciprocity) {}

ModelVariant ModelVariant::baseline(bool reciprocity) {
    return ModelVariant(OffsetRegime::Baseline, reciprocity);
}

ModelVariant ModelVariant::sparse_density() {
    return ModelVariant(OffsetRegime::SparseDensity, false);
}

ModelVariant ModelVariant::sparse_density_with_reciprocity() {
    return ModelVariant(OffsetRegime::SparseDensity, true);
}

ModelVariant ModelVariant::sparse_reciprocity() {
    return ModelVariant(OffsetRegime::SparseReciprocity, true);
}

double ModelVariant::alpha_offset(std::int64_t n_vertices) const {
    return is_sparse() ? -std::log(static_cast<double>(n_vertices)) : 0.0;
}

double ModelVariant::beta_offset(std::int64_t n_vertices) const {
    return regime_ == OffsetRegime::SparseReciprocity
               ? std::log(static_cast<double>(n_vertices))
               : 0.0;
}

std::string ModelVariant::name() const {
    switch (regime_) {
        case OffsetRegime::Baseline: return "baseline";
        case OffsetRegime::SparseDensity: return "sparse-density";
        case OffsetRegime::SparseReciprocity: return "sparse-recip";
    }
    return "unknown";
}

ModelVariant ModelVariant::parse(const std::string& name, bool reciprocity) {
    if (name == "baseline") return baseline(reciprocity);
    if (name == "sparse-density") {
        return reciprocity ? sparse_density_with_reciprocity() : sparse_density();
    }
    if (name == "sparse-recip") {
        if (!reciprocity) {
            throw UnsupportedVariant("sparse-recip requires the reciprocity parameter");
        }
        return sparse_reciprocity();
    }
    throw std::invalid_argument("unknown model variant: " + name);
}

InfoMatrix InfoMatrix::inverse() const {
    const double d = det();
    if (d == 0.0 || !std::isfinite(d)) {
        throw std::domain_error("information matrix is singular");
    }
    return InfoMatrix{bb / d, -ab / d, aa / d};
}

namespace detail {

void require_dyads(std::int64_t n_vertices) {
    if (n_vertices < 2) {
        throw std::domain_error("no dyads exist: n_vertices must be at least 2");
    }
    if (n_vertices > (std::int64_t{1} << 31)) {
        throw std::domain_error("n_vertices too large");
    }
}

std::int64_t dyad_count(std::int64_t n_vertices) {
    return n_vertices * (n_vertices - 1) / 2;
}

EffectiveExponents effective_exponents(const NaturalParams& params,
                                       const ModelVariant& variant,
                                       std::int64_t n_vertices) {
    require_dyads(n_vertices);
    const double a_eff = params.alpha + variant.alpha_offset(n_vertices);
    const double b_eff = params.beta + variant.beta_offset(n_vertices);
    return EffectiveExponents{a_eff, 2.0 * a_eff + b_eff};
}

namespace {

// log(1 + 2 e^la + e^lb), stable for |la|, |lb| up to ~700.
double log_kappa(double la, double lb) {
    const double top = std::max({0.0, la, lb});
    return top + std::log(std::exp(-top) + 2.0 * std::exp(la - top) + std::exp(lb - top));
}

}  // namespace

}  // namespace detail

DyadDistribution dyad_distribution(const NaturalParams& params,
                                   const ModelVariant& variant,
                                   std::int64_t n_vertices) {
    const auto e = detail::effective_exponents(params, variant, n_vertices);
    const double lk = detail::log_kappa(e.log_a, e.log_b);
    return DyadDistribution{std::exp(-lk), std::exp(e.log_a - lk), std::exp(e.log_b - lk)};
}

double log_normalizer(const NaturalParams& params, const ModelVariant& variant,
                      std::int64_t n_vertices) {
    const auto e = detail::effective_exponents(params, variant, n_vertices);
    return static_cast<double>(detail::dyad_count(n_vertices)) *
           detail::log_kappa(e.log_a, e.log_b);
}

SuffStats expected_stats(const NaturalParams& params, const ModelVariant& variant,
                         std::int64_t n_vertices) {
    const auto d = dyad_distribution(params, variant, n_vertices);
    const double pairs = static_cast<double>(detail::dyad_count(n_vertices));
    return SuffStats{pairs * 2.0 * (d.p_single + d.p_mutual), pairs * d.p_mutual};
}

InfoMatrix stat_covariance(const NaturalParams& params, const ModelVariant& variant,
                           std::int64_t n_vertices) {
    // Raw moments of the single-dyad statistic (s_d, m_d):
    // s_d in {0,1,1,2}, m_d in {0,0,0,1} over (null, ->, <-, mutual).
    const auto d = dyad_distribution(params, variant, n_vertices);
    const double es = 2.0 * (d.p_single + d.p_mutual);
    const double em = d.p_mutual;
    const double es2 = 2.0 * d.p_single + 4.0 * d.p_mutual;
    const double esm = 2.0 * d.p_mutual;
    const double pairs = static_cast<double>(detail::dyad_count(n_vertices));
    // Dyads are iid, so Cov(s_bar, m_bar) = (per-dyad covariance) / C(N_v,2).
    return InfoMatrix{(es2 - es * es) / pairs, (esm - es * em) / pairs,
                      (em - em * em) / pairs};
}

InfoMatrix fisher_information(const NaturalParams& params, const ModelVariant& variant,
                              std::int64_t n_vertices) {
    const double pairs = static_cast<double>(detail::dyad_count(n_vertices));
    if (!variant.reciprocity()) {
        // Independent edges with probability p = A'/(1+A'):
        // I(alpha) = N_v (N_v - 1) p (1 - p).
        const auto e = detail::effective_exponents(params, variant, n_vertices);
        const double p = 1.0 / (1.0 + std::exp(-e.log_a));
        return InfoMatrix{2.0 * pairs * p * (1.0 - p), 0.0, 0.0};
    }
    const auto d = dyad_distribution(params, variant, n_vertices);
    // Closed form in A' = e^la, B' = e^lb, written with per-state probabilities
    // (A'/kappa^2 = p_single * p_null etc.) so nothing can overflow:
    //   I/C = [[2A+4B+2AB, 2B+2AB], [2B+2AB, B+2AB]] / kappa^2
    const double pn = d.p_null, ps = d.p_single, pm = d.p_mutual;
    const double aa = 2.0 * ps * pn + 4.0 * pm * pn + 2.0 * ps * pm;
    const double ab = 2.0 * pm * pn + 2.0 * ps * pm;
    const double bb = pm * pn + 2.0 * ps * pm;
    return InfoMatrix{pairs * aa, pairs * ab, pairs * bb};
}

InfoMatrix asymptotic_covariance(const NaturalParams& params,
                                 const ModelVariant& variant) {
    if (!variant.is_sparse()) {
        throw UnsupportedVariant(
            "asymptotic_covariance applies to sparse variants only; the baseline "
            "regime scales with C(N_v,2)^{1/2}, see fisher_information");
    }
    const double inv_a = std::exp(-params.alpha);
    if (variant.regime() == OffsetRegime::SparseDensity) {
        if (variant.reciprocity()) {
            throw UnsupportedVariant(
                "sparse-density with reciprocity has no joint limit covariance: "
                "information on beta stays bounded");
        }
        return InfoMatrix{inv_a, 0.0, 0.0};
    }
    return InfoMatrix{inv_a, -2.0 * inv_a,
                      inv_a * (4.0 + 2.0 * std::exp(-params.alpha - params.beta))};
}

}  // namespace dyadnet
