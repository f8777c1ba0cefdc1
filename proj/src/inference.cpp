#include "dyadnet/inference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dyadnet {

namespace {

void require_valid_level(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::domain_error("confidence level must lie in (0, 1)");
    }
}

ConfidenceInterval interval_about(double center, double se, double level, double z) {
    return ConfidenceInterval{level, center - z * se, center + z * se};
}

}  // namespace

bool mle_exists(const DyadCensus& census, bool reciprocity) {
    const std::int64_t total = census.n_vertices * (census.n_vertices - 1);
    if (!reciprocity) {
        return census.s() > 0 && census.s() < total;
    }
    // Strict interior of the convex hull of (s, m): equivalent to all three
    // dyad-state counts being positive. (The textbook inequalities
    // 0 < s < N_v(N_v-1), 0 < m < s/2 miss the n_null >= 1 face.)
    return census.n_null > 0 && census.n_asym > 0 && census.n_mutual > 0;
}

FitResult fit_mle(const DyadCensus& census, const ModelVariant& variant) {
    if (variant.regime() == OffsetRegime::SparseDensity && variant.reciprocity()) {
        throw UnsupportedVariant(
            "sparse-density with reciprocity is not a supported fitting target: "
            "beta is not reliably estimable under it");
    }
    detail::require_dyads(census.n_vertices);
    const std::int64_t n = census.n_vertices;

    FitResult result{variant, n, false, std::nullopt, 0.0, 0.0, InfoMatrix{}};
    if (!mle_exists(census, variant.reciprocity())) {
        return result;
    }

    double alpha_eff;
    double beta_eff = 0.0;
    if (variant.reciprocity()) {
        const double a_hat = static_cast<double>(census.n_asym) /
                             (2.0 * static_cast<double>(census.n_null));
        const double b_hat = static_cast<double>(census.n_mutual) /
                             static_cast<double>(census.n_null);
        alpha_eff = std::log(a_hat);
        beta_eff = std::log(b_hat) - 2.0 * alpha_eff;
    } else {
        const double p = static_cast<double>(census.s()) / static_cast<double>(n * (n - 1));
        alpha_eff = std::log(p) - std::log1p(-p);
    }

    result.exists = true;
    result.params = NaturalParams(alpha_eff - variant.alpha_offset(n),
                                  variant.reciprocity()
                                      ? beta_eff - variant.beta_offset(n)
                                      : 0.0);
    result.info_observed = fisher_information(*result.params, variant, n);
    if (variant.reciprocity()) {
        const InfoMatrix inv = result.info_observed.inverse();
        result.se_alpha = std::sqrt(inv.aa);
        result.se_beta = std::sqrt(inv.bb);
    } else {
        result.se_alpha = std::sqrt(1.0 / result.info_observed.aa);
        result.se_beta = 0.0;
    }
    return result;
}

Score score(const DyadCensus& census, const NaturalParams& params,
            const ModelVariant& variant) {
    const SuffStats expected = expected_stats(params, variant, census.n_vertices);
    const double n = static_cast<double>(census.n_vertices);
    const double d_alpha = (static_cast<double>(census.s()) - expected.s) / n;
    const double d_beta =
        variant.reciprocity() ? (static_cast<double>(census.m()) - expected.m) / n : 0.0;
    return Score{d_alpha, d_beta};
}

WaldIntervals wald_ci(const FitResult& fit, double level) {
    require_valid_level(level);
    if (!fit.exists) {
        throw std::invalid_argument("cannot form a confidence interval: MLE does not exist");
    }
    if (!fit.variant.is_sparse()) {
        throw UnsupportedVariant(
            "plug-in Wald intervals are defined for the sparse variants; "
            "use wald_ci_observed for baseline fits");
    }
    const double z = normal_quantile(0.5 + level / 2.0);
    const double n = static_cast<double>(fit.n_vertices);
    const double alpha_hat = fit.params->alpha;
    const double se_a = std::sqrt(std::exp(-alpha_hat) / n);

    WaldIntervals out{interval_about(alpha_hat, se_a, level, z), std::nullopt};
    if (fit.variant.reciprocity()) {
        const double beta_hat = fit.params->beta;
        const double se_b = std::sqrt(
            std::exp(-alpha_hat) * (4.0 + 2.0 * std::exp(-alpha_hat - beta_hat)) / n);
        out.beta = interval_about(beta_hat, se_b, level, z);
    }
    return out;
}

WaldIntervals wald_ci_observed(const FitResult& fit, double level) {
    require_valid_level(level);
    if (!fit.exists) {
        throw std::invalid_argument("cannot form a confidence interval: MLE does not exist");
    }
    const double z = normal_quantile(0.5 + level / 2.0);
    WaldIntervals out{interval_about(fit.params->alpha, fit.se_alpha, level, z),
                      std::nullopt};
    if (fit.variant.reciprocity()) {
        out.beta = interval_about(fit.params->beta, fit.se_beta, level, z);
    }
    return out;
}

namespace detail {

namespace {

constexpr double kNewtonTol = 1e-10;
constexpr int kNewtonMaxIter = 100;
constexpr double kIterateBound = 49.9;

double clamp_iterate(double x) {
    return std::clamp(x, -kIterateBound, kIterateBound);
}

// Residual of the per-vertex moment equations at natural parameters (a, b).
std::pair<double, double> moment_residual(double a, double b, double ts, double tm,
                                          std::int64_t n, const ModelVariant& variant) {
    const SuffStats mu = expected_stats(NaturalParams(a, b), variant, n);
    const double nd = static_cast<double>(n);
    return {ts - mu.s / nd, tm - mu.m / nd};
}

}  // namespace

NewtonTrace mean_value_to_natural_traced(const MeanValueTargets& targets,
                                         std::int64_t n_vertices,
                                         const ModelVariant& variant) {
    if (variant.regime() == OffsetRegime::SparseDensity && variant.reciprocity()) {
        throw UnsupportedVariant(
            "mean-value inversion targets a fitting variant; sparse-density with "
            "reciprocity is rejected");
    }
    require_dyads(n_vertices);
    const double nd = static_cast<double>(n_vertices);
    const double ts = targets.edges_per_vertex;
    const double tm = targets.mutuals_per_vertex;

    if (!(ts > 0.0 && ts < nd - 1.0)) {
        throw std::domain_error("edges_per_vertex target must lie strictly in (0, N_v - 1)");
    }

    if (!variant.reciprocity()) {
        // One parameter: E[s]/N_v = (N_v - 1) p solves in closed form.
        const double p = ts / (nd - 1.0);
        const double alpha_eff = std::log(p) - std::log1p(-p);
        return NewtonTrace{
            NaturalParams(alpha_eff - variant.alpha_offset(n_vertices)), 0};
    }

    if (!(tm > 0.0 && tm < ts / 2.0)) {
        throw std::domain_error(
            "mutuals_per_vertex target must lie strictly in (0, edges_per_vertex / 2)");
    }
    // Third face of the per-dyad mean polytope: p_null > 0.
    const double ts_dyad = 2.0 * ts / (nd - 1.0);
    const double tm_dyad = 2.0 * tm / (nd - 1.0);
    if (!(tm_dyad > ts_dyad - 1.0)) {
        throw std::domain_error(
            "targets outside the attainable region: they imply a negative "
            "probability of an empty dyad");
    }

    double a, b;
    if (variant.is_sparse()) {
        // Sparse-limit closed form: A0 = s* - 2m*, B0 = 2m*.
        const double a0 = ts - 2.0 * tm;
        const double b0 = 2.0 * tm;
        a = clamp_iterate(std::log(a0));
        b = clamp_iterate(std::log(b0) - 2.0 * a);
    } else {
        // Baseline: the per-dyad distribution inverts exactly.
        const double p_mutual = tm_dyad;
        const double p_single = (ts_dyad - 2.0 * tm_dyad) / 2.0;
        const double p_null = 1.0 - ts_dyad + tm_dyad;
        a = clamp_iterate(std::log(p_single / p_null));
        b = clamp_iterate(std::log(p_mutual / p_null) - 2.0 * a);
    }

    auto [ra, rb] = moment_residual(a, b, ts, tm, n_vertices, variant);
    double norm = std::max(std::abs(ra), std::abs(rb));
    for (int iter = 1; iter <= kNewtonMaxIter; ++iter) {
        if (norm < kNewtonTol) {
            return NewtonTrace{NaturalParams(a, b), iter - 1};
        }
        const InfoMatrix info = fisher_information(NaturalParams(a, b), variant, n_vertices);
        const double det = info.det();
        if (!(det > 0.0) || !std::isfinite(det)) {
            throw std::runtime_error("mean-value inversion: singular Jacobian");
        }
        // delta = (Fisher / N_v)^{-1} residual
        double da = nd * (info.bb * ra - info.ab * rb) / det;
        double db = nd * (info.aa * rb - info.ab * ra) / det;

        // Step halving keeps the iteration inside the domain and monotone.
        double step = 1.0;
        for (int halving = 0; halving < 12; ++halving) {
            const double na = clamp_iterate(a + step * da);
            const double nb = clamp_iterate(b + step * db);
            const auto [nra, nrb] = moment_residual(na, nb, ts, tm, n_vertices, variant);
            const double nnorm = std::max(std::abs(nra), std::abs(nrb));
            if (std::isfinite(nnorm) && nnorm < norm) {
                a = na;
                b = nb;
                ra = nra;
                rb = nrb;
                norm = nnorm;
                break;
            }
            step /= 2.0;
        }
    }
    std::ostringstream msg;
    msg << "mean-value inversion did not converge in " << kNewtonMaxIter
        << " iterations; last iterate alpha=" << a << " beta=" << b
        << " residual=" << norm;
    throw std::runtime_error(msg.str());
}

}  // namespace detail

NaturalParams mean_value_to_natural(const MeanValueTargets& targets,
                                    std::int64_t n_vertices,
                                    const ModelVariant& variant) {
    return detail::mean_value_to_natural_traced(targets, n_vertices, variant).params;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("normal_quantile requires p in (0, 1)");
    }
    // Acklam's rational approximation (|rel err| < 1.15e-9), then two Halley
    // refinements against the erfc-based CDF.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    constexpr double sqrt_two_pi = 2.506628274631000502;
    for (int i = 0; i < 2; ++i) {
        const double err = normal_cdf(x) - p;
        const double u = err * sqrt_two_pi * std::exp(x * x / 2.0);
        if (!std::isfinite(u)) break;
        x -= u / (1.0 + x * u / 2.0);
    }
    return x;
}

}  // namespace dyadnet
