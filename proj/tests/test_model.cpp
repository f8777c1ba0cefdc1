#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "dyadnet/model.hpp"
#include "dyadnet/rng.hpp"

using namespace dyadnet;

namespace {

double rand_in(SplitMix64& rng, double lo, double hi) {
    return lo + (hi - lo) * rng.next_double();
}

std::vector<ModelVariant> reciprocity_variants() {
    return {ModelVariant::baseline(true), ModelVariant::sparse_density_with_reciprocity(),
            ModelVariant::sparse_reciprocity()};
}

std::vector<ModelVariant> all_variants() {
    auto v = reciprocity_variants();
    v.push_back(ModelVariant::baseline(false));
    v.push_back(ModelVariant::sparse_density());
    return v;
}

// Central finite differences of the log normalizer.
double fd_gradient(const ModelVariant& v, std::int64_t n, double alpha, double beta,
                   bool wrt_beta, double h = 1e-5) {
    const double up = wrt_beta ? log_normalizer(NaturalParams(alpha, beta + h), v, n)
                               : log_normalizer(NaturalParams(alpha + h, beta), v, n);
    const double dn = wrt_beta ? log_normalizer(NaturalParams(alpha, beta - h), v, n)
                               : log_normalizer(NaturalParams(alpha - h, beta), v, n);
    return (up - dn) / (2.0 * h);
}

double fd_hessian(const ModelVariant& v, std::int64_t n, double alpha, double beta,
                  int i, int j, double h = 5e-4) {
    auto psi = [&](double a, double b) { return log_normalizer(NaturalParams(a, b), v, n); };
    if (i == j) {
        const double da = i == 0 ? h : 0.0;
        const double db = i == 0 ? 0.0 : h;
        return (psi(alpha + da, beta + db) - 2.0 * psi(alpha, beta) +
                psi(alpha - da, beta - db)) /
               (h * h);
    }
    return (psi(alpha + h, beta + h) - psi(alpha + h, beta - h) -
            psi(alpha - h, beta + h) + psi(alpha - h, beta - h)) /
           (4.0 * h * h);
}

}  // namespace

TEST_CASE("natural parameters reject invalid values") {
    CHECK_THROWS_AS(NaturalParams(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(NaturalParams(0.0, std::numeric_limits<double>::infinity()),
                    std::domain_error);
    CHECK_THROWS_AS(NaturalParams(50.5), std::domain_error);
    CHECK_THROWS_AS(NaturalParams(0.0, -51.0), std::domain_error);
    CHECK(NaturalParams(-50.0, 50.0).alpha == -50.0);
}

TEST_CASE("mean-value targets enforce the per-dyad bound") {
    CHECK_THROWS_AS(MeanValueTargets(1.0, 0.6), std::domain_error);
    CHECK_THROWS_AS(MeanValueTargets(-1.0, 0.0), std::domain_error);
    CHECK(MeanValueTargets(1.0, 0.5).mutuals_per_vertex == 0.5);
}

TEST_CASE("variant construction and offsets") {
    CHECK(ModelVariant::sparse_reciprocity().reciprocity());
    CHECK_THROWS_AS(ModelVariant::parse("sparse-recip", false), UnsupportedVariant);
    CHECK_THROWS_AS(ModelVariant::parse("bogus", true), std::invalid_argument);

    const auto recip = ModelVariant::sparse_reciprocity();
    CHECK(recip.alpha_offset(100) == doctest::Approx(-std::log(100.0)));
    CHECK(recip.beta_offset(100) == doctest::Approx(std::log(100.0)));
    CHECK(ModelVariant::sparse_density().beta_offset(100) == 0.0);
    CHECK(ModelVariant::baseline().alpha_offset(100) == 0.0);
}

TEST_CASE("dyad distribution matches hand-computed values") {
    const auto b = ModelVariant::baseline(true);

    auto d = dyad_distribution(NaturalParams(0.0, 0.0), b, 7);
    CHECK(d.p_null == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(d.p_single == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(d.p_mutual == doctest::Approx(0.25).epsilon(1e-14));

    d = dyad_distribution(NaturalParams(std::log(2.0), 0.0), b, 7);
    CHECK(d.p_null == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(d.p_single == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(d.p_mutual == doctest::Approx(4.0 / 9.0).epsilon(1e-14));

    // Sparse-density offset at alpha = beta = 0: weights (1, 1/N, 1/N^2).
    d = dyad_distribution(NaturalParams(0.0, 0.0), ModelVariant::sparse_density(), 100);
    const double kappa = 1.0 + 2.0 / 100.0 + 1.0 / (100.0 * 100.0);
    CHECK(d.p_single == doctest::Approx((1.0 / 100.0) / kappa).epsilon(1e-14));

    CHECK_THROWS_AS(dyad_distribution(NaturalParams(0.0), b, 1), std::domain_error);
}

TEST_CASE("dyad distribution is normalized across the domain") {
    for (const auto& v : all_variants()) {
        for (const std::int64_t n : {std::int64_t{2}, std::int64_t{10}, std::int64_t{1000000}}) {
            for (double alpha = -10.0; alpha <= 10.0; alpha += 2.5) {
                for (double beta = -10.0; beta <= 10.0; beta += 2.5) {
                    const auto d = dyad_distribution(
                        NaturalParams(alpha, v.reciprocity() ? beta : 0.0), v, n);
                    CHECK(std::abs(d.sum() - 1.0) <= 1e-12);
                    CHECK(d.p_null >= 0.0);
                    CHECK(d.p_null <= 1.0);
                    CHECK(d.p_single >= 0.0);
                    CHECK(d.p_mutual >= 0.0);
                }
            }
        }
    }
}

TEST_CASE("dyad distribution survives extreme parameters") {
    // log-space path: |alpha| up to the domain bound must not overflow.
    const auto d = dyad_distribution(NaturalParams(50.0, 50.0), ModelVariant::baseline(true), 10);
    CHECK(std::isfinite(d.p_mutual));
    CHECK(d.p_mutual == doctest::Approx(1.0));
    const auto d2 =
        dyad_distribution(NaturalParams(0.0, -50.0), ModelVariant::baseline(true), 10);
    CHECK(d2.p_mutual >= 0.0);
    CHECK(d2.p_mutual < 1e-20);
}

TEST_CASE("log normalizer on tiny networks") {
    const auto b = ModelVariant::baseline(true);
    CHECK(log_normalizer(NaturalParams(0.0, 0.0), b, 2) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(log_normalizer(NaturalParams(0.0, 0.0), b, 3) ==
          doctest::Approx(3.0 * std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("expected stats: single-dyad uniform case and sparse limit") {
    const auto stats = expected_stats(NaturalParams(0.0, 0.0), ModelVariant::baseline(true), 2);
    CHECK(stats.s == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(stats.m == doctest::Approx(0.25).epsilon(1e-14));

    // Per-vertex statistics stabilize under the reciprocity-preserving offsets.
    const NaturalParams p(0.3, -0.4);
    const auto big = expected_stats(p, ModelVariant::sparse_reciprocity(), 10000);
    const double mean_degree_limit = std::exp(p.alpha) + std::exp(2.0 * p.alpha + p.beta);
    CHECK(big.s / 10000.0 == doctest::Approx(mean_degree_limit).epsilon(0.01));
    CHECK(2.0 * big.m / 10000.0 ==
          doctest::Approx(std::exp(2.0 * p.alpha + p.beta)).epsilon(0.01));
}

TEST_CASE("stat covariance: enumeration for one dyad, positivity in general") {
    // N=2: one dyad, four states; Var(s) = E[s^2] - E[s]^2 = 3/2 - 1.
    const auto cov = stat_covariance(NaturalParams(0.0, 0.0), ModelVariant::baseline(true), 2);
    CHECK(cov.aa == doctest::Approx(0.5).epsilon(1e-14));

    SplitMix64 rng(Seed{2024});
    for (int i = 0; i < 50; ++i) {
        const NaturalParams p(rand_in(rng, -3, 3), rand_in(rng, -3, 3));
        for (const auto& v : reciprocity_variants()) {
            const auto c = stat_covariance(p, v, 40);
            CHECK(c.ab >= 0.0);  // s and m move together across dyad states
            CHECK(c.aa > 0.0);
            CHECK(c.bb > 0.0);
        }
    }
}

TEST_CASE("fisher information closed forms") {
    // No reciprocity, alpha = 0, N = 3: C(3,2) * 2 e^a / (1+e^a)^2 = 3/2.
    const auto scalar =
        fisher_information(NaturalParams(0.0), ModelVariant::baseline(false), 3);
    CHECK(scalar.aa == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(scalar.ab == 0.0);
    CHECK(scalar.bb == 0.0);

    // Sparse-density information grows like N_v e^alpha.
    const auto sparse =
        fisher_information(NaturalParams(0.0), ModelVariant::sparse_density(), 10000);
    CHECK(sparse.aa / 10000.0 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("fisher information equals scaled per-dyad covariance") {
    SplitMix64 rng(Seed{77});
    for (int i = 0; i < 40; ++i) {
        const NaturalParams p(rand_in(rng, -2, 2), rand_in(rng, -2, 2));
        const std::int64_t n = 5 + static_cast<std::int64_t>(rng.next_below(300));
        for (const auto& v : reciprocity_variants()) {
            const auto info = fisher_information(p, v, n);
            const auto cov = stat_covariance(p, v, n);
            const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
            const double scale =
                std::max({std::abs(info.aa), std::abs(info.ab), std::abs(info.bb)});
            CHECK(std::abs(info.aa - pairs * pairs * cov.aa) <= 1e-10 * scale);
            CHECK(std::abs(info.ab - pairs * pairs * cov.ab) <= 1e-10 * scale);
            CHECK(std::abs(info.bb - pairs * pairs * cov.bb) <= 1e-10 * scale);
        }
    }
}

TEST_CASE("log normalizer derivatives reproduce moments and information") {
    SplitMix64 rng(Seed{31337});
    const std::int64_t n = 100;
    for (const auto& v : all_variants()) {
        for (int i = 0; i < 25; ++i) {
            const double alpha = rand_in(rng, -2, 2);
            const double beta = v.reciprocity() ? rand_in(rng, -2, 2) : 0.0;
            const NaturalParams p(alpha, beta);

            const auto stats = expected_stats(p, v, n);
            const auto info = fisher_information(p, v, n);
            const double stat_scale = std::max(std::abs(stats.s), std::abs(stats.m));
            const double info_scale =
                std::max({std::abs(info.aa), std::abs(info.ab), std::abs(info.bb)});

            CHECK(std::abs(fd_gradient(v, n, alpha, beta, false) - stats.s) <=
                  1e-6 * stat_scale);
            CHECK(std::abs(fd_hessian(v, n, alpha, beta, 0, 0) - info.aa) <=
                  1e-6 * info_scale);
            if (v.reciprocity()) {
                CHECK(std::abs(fd_gradient(v, n, alpha, beta, true) - stats.m) <=
                      1e-6 * stat_scale);
                CHECK(std::abs(fd_hessian(v, n, alpha, beta, 0, 1) - info.ab) <=
                      1e-6 * info_scale);
                CHECK(std::abs(fd_hessian(v, n, alpha, beta, 1, 1) - info.bb) <=
                      1e-6 * info_scale);
            }
        }
    }
}

TEST_CASE("offsets are reparameterisations") {
    SplitMix64 rng(Seed{11});
    for (int i = 0; i < 30; ++i) {
        const double alpha = rand_in(rng, -3, 3);
        const double beta = rand_in(rng, -3, 3);
        const std::int64_t n = 3 + static_cast<std::int64_t>(rng.next_below(5000));
        const double log_n = std::log(static_cast<double>(n));

        const auto shifted = dyad_distribution(NaturalParams(alpha, beta),
                                               ModelVariant::sparse_reciprocity(), n);
        const auto direct = dyad_distribution(NaturalParams(alpha - log_n, beta + log_n),
                                              ModelVariant::baseline(true), n);
        CHECK(std::abs(shifted.p_null - direct.p_null) <= 1e-12);
        CHECK(std::abs(shifted.p_single - direct.p_single) <= 1e-12);
        CHECK(std::abs(shifted.p_mutual - direct.p_mutual) <= 1e-12);
    }
}

TEST_CASE("under sparse-density only the density information grows") {
    const NaturalParams p(0.4, 0.8);
    const auto v = ModelVariant::sparse_density_with_reciprocity();
    const double a = std::exp(p.alpha);
    const double b = std::exp(2.0 * p.alpha + p.beta);

    double prev_gap_12 = std::numeric_limits<double>::infinity();
    double prev_gap_22 = std::numeric_limits<double>::infinity();
    for (const std::int64_t n : {100, 1000, 10000, 100000}) {
        const auto info = fisher_information(p, v, n);
        const double gap_12 = std::abs(info.ab - b);
        const double gap_22 = std::abs(info.bb - b / 2.0);
        CHECK(gap_12 < prev_gap_12);
        CHECK(gap_22 < prev_gap_22);
        prev_gap_12 = gap_12;
        prev_gap_22 = gap_22;
    }
    const auto info = fisher_information(p, v, 100000);
    CHECK(info.aa / 100000.0 == doctest::Approx(a).epsilon(0.01));
    CHECK(info.ab == doctest::Approx(b).epsilon(0.01));
    CHECK(info.bb == doctest::Approx(b / 2.0).epsilon(0.01));
}

TEST_CASE("asymptotic covariance of the sparse estimators") {
    const auto recip = asymptotic_covariance(NaturalParams(0.0, 0.0),
                                             ModelVariant::sparse_reciprocity());
    CHECK(recip.aa == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(recip.ab == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(recip.bb == doctest::Approx(6.0).epsilon(1e-14));

    const auto scalar =
        asymptotic_covariance(NaturalParams(1.0), ModelVariant::sparse_density());
    CHECK(scalar.aa == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

    CHECK_THROWS_AS(asymptotic_covariance(NaturalParams(0.0), ModelVariant::baseline(true)),
                    UnsupportedVariant);
    CHECK_THROWS_AS(asymptotic_covariance(NaturalParams(0.0),
                                          ModelVariant::sparse_density_with_reciprocity()),
                    UnsupportedVariant);
}

TEST_CASE("asymptotic covariance inverts the score limit matrix") {
    SplitMix64 rng(Seed{5});
    for (int i = 0; i < 25; ++i) {
        const NaturalParams p(rand_in(rng, -2, 2), rand_in(rng, -2, 2));
        const auto cov = asymptotic_covariance(p, ModelVariant::sparse_reciprocity());
        const double a = std::exp(p.alpha);
        const double b = std::exp(2.0 * p.alpha + p.beta);
        // V = [[A + 2B, B], [B, B/2]]
        const double v11 = a + 2.0 * b, v12 = b, v22 = b / 2.0;
        const double tol =
            1e-12 * std::max(1.0, (std::abs(cov.aa) + std::abs(cov.bb)) * (v11 + v22));
        CHECK(std::abs(cov.aa * v11 + cov.ab * v12 - 1.0) <= tol);
        CHECK(std::abs(cov.aa * v12 + cov.ab * v22 - 0.0) <= tol);
        CHECK(std::abs(cov.ab * v12 + cov.bb * v22 - 1.0) <= tol);
        CHECK(std::abs(cov.ab * v11 + cov.bb * v12 - 0.0) <= tol);
    }
}
