#ifndef DYADNET_INFERENCE_HPP
#define DYADNET_INFERENCE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "dyadnet/model.hpp"
#include "dyadnet/sampler.hpp"

namespace dyadnet {

/// Maximum-likelihood fit of a dyad census. Non-existence of the MLE is data,
/// not an error: exists = false leaves the estimate fields empty.
struct FitResult {
    ModelVariant variant;
    std::int64_t n_vertices = 0;
    bool exists = false;
    std::optional<NaturalParams> params;
    /// sqrt of the diagonal of fisher_information(params)^{-1}.
    double se_alpha = 0.0;
    double se_beta = 0.0;
    InfoMatrix info_observed;
};

struct ConfidenceInterval {
    double level;
    double lower;
    double upper;

    double width() const { return upper - lower; }
    bool contains(double x) const { return lower <= x && x <= upper; }
};

struct WaldIntervals {
    ConfidenceInterval alpha;
    std::optional<ConfidenceInterval> beta;  // absent for one-parameter models
};

/// Per-N_v-normalized log-likelihood gradient: ((s - E[s])/N_v, (m - E[m])/N_v).
struct Score {
    double d_alpha;
    double d_beta;
};

/// True iff the sufficient statistics lie strictly inside their attainable
/// polytope. With reciprocity this is equivalent to every census cell being
/// positive (n_null, n_asym, n_mutual >= 1); without, 0 < s < N_v(N_v-1).
bool mle_exists(const DyadCensus& census, bool reciprocity);

/// Closed-form MLE from the per-dyad multinomial structure:
///   A_hat = n_asym / (2 n_null), B_hat = n_mutual / n_null
/// in effective coordinates, shifted back by the variant offsets. The
/// no-reciprocity estimate is logit(s / (N_v (N_v - 1))) plus its offset.
/// Throws UnsupportedVariant for sparse-density with reciprocity.
FitResult fit_mle(const DyadCensus& census, const ModelVariant& variant);

Score score(const DyadCensus& census, const NaturalParams& params,
            const ModelVariant& variant);

/// Wald intervals from the sparse-regime plug-in standard errors:
///   alpha_hat +- z sqrt(e^{-alpha_hat} / N_v)
///   beta_hat  +- z sqrt(e^{-alpha_hat} (4 + 2 e^{-alpha_hat - beta_hat}) / N_v)
/// (scalar case: the alpha formula only). Baseline fits are rejected; use
/// wald_ci_observed for those.
WaldIntervals wald_ci(const FitResult& fit, double level);

/// Wald intervals from the observed-information standard errors of the fit.
/// Valid for any variant; this is the fallback reported for baseline fits.
WaldIntervals wald_ci_observed(const FitResult& fit, double level);

/// Invert per-vertex mean-value targets to natural parameters by Newton's
/// method (Jacobian = fisher_information / N_v), initialized from the
/// sparse-limit closed form A0 = s* - 2m*, B0 = 2m*. Converges to residual
/// < 1e-10 in the mean-value scale or throws after 100 iterations.
NaturalParams mean_value_to_natural(const MeanValueTargets& targets,
                                    std::int64_t n_vertices,
                                    const ModelVariant& variant);

/// Standard normal quantile, |error| < 1e-9 (rational approximation with
/// Halley refinement on the erfc-based CDF).
double normal_quantile(double p);

double normal_cdf(double x);

namespace detail {

struct NewtonTrace {
    NaturalParams params;
    int iterations;
};

NewtonTrace mean_value_to_natural_traced(const MeanValueTargets& targets,
                                         std::int64_t n_vertices,
                                         const ModelVariant& variant);

}  // namespace detail

}  // namespace dyadnet

#endif  // DYADNET_INFERENCE_HPP
