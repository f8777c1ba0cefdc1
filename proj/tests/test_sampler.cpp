#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "dyadnet/model.hpp"
#include "dyadnet/rng.hpp"
#include "dyadnet/sampler.hpp"

using namespace dyadnet;

namespace {

// Total variation distance between an empirical degree histogram and a
// Poisson law, including the Poisson tail mass beyond the histogram.
double tv_to_poisson(const std::vector<std::int64_t>& degrees, double lambda) {
    std::map<std::int64_t, std::int64_t> hist;
    for (const auto d : degrees) ++hist[d];
    const double n = static_cast<double>(degrees.size());

    double tv = 0.0;
    double pmf = std::exp(-lambda);
    double tail = 1.0;
    const std::int64_t max_deg = hist.empty() ? 0 : hist.rbegin()->first;
    for (std::int64_t k = 0; k <= max_deg + 200; ++k) {
        const auto it = hist.find(k);
        const double emp = it == hist.end() ? 0.0 : static_cast<double>(it->second) / n;
        tv += std::abs(emp - pmf);
        tail -= pmf;
        pmf *= lambda / static_cast<double>(k + 1);
    }
    return 0.5 * (tv + std::max(tail, 0.0));
}

}  // namespace

TEST_CASE("seed derivation is stable and collision-averse") {
    const Seed master{42};
    CHECK(master.derive(0).master == master.derive(0).master);
    CHECK(master.derive(0).master != master.derive(1).master);
    CHECK(master.derive(1).master != master.derive(2).master);
    CHECK(Seed{0}.derive(0).master != 0);
}

TEST_CASE("uniform next_below stays in range and covers residues") {
    SplitMix64 rng(Seed{9});
    std::vector<std::int64_t> counts(7, 0);
    for (int i = 0; i < 70000; ++i) ++counts[rng.next_below(7)];
    for (const auto c : counts) {
        CHECK(c > 9000);
        CHECK(c < 11000);
    }
    CHECK_THROWS_AS(rng.next_below(0), std::invalid_argument);
}

TEST_CASE("binomial draws match first two moments") {
    SplitMix64 rng(Seed{123});
    const std::int64_t n = 1000;
    const double p = 0.3;
    const int reps = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < reps; ++i) {
        const auto draw = binomial_draw(rng, n, p);
        CHECK(draw >= 0);
        CHECK(draw <= n);
        sum += static_cast<double>(draw);
        sum2 += static_cast<double>(draw) * static_cast<double>(draw);
    }
    const double mean = sum / reps;
    const double var = sum2 / reps - mean * mean;
    const double true_mean = static_cast<double>(n) * p;
    const double true_var = true_mean * (1.0 - p);
    CHECK(std::abs(mean - true_mean) <= 4.0 * std::sqrt(true_var / reps));
    CHECK(std::abs(var - true_var) <= 5.0 * true_var * std::sqrt(2.0 / reps));

    CHECK(binomial_draw(rng, 100, 0.0) == 0);
    CHECK(binomial_draw(rng, 100, 1.0) == 100);
    CHECK(binomial_draw(rng, 0, 0.5) == 0);
}

TEST_CASE("binomial draws survive huge trial counts") {
    // log-space pmf at the mode: no underflow even when (1-p)^n does.
    SplitMix64 rng(Seed{7});
    const std::int64_t n = 2'000'000;
    const double p = 1e-3;
    const auto draw = binomial_draw(rng, n, p);
    CHECK(draw > 1500);
    CHECK(draw < 2500);
}

TEST_CASE("census counts dyad states exactly") {
    Network tri{3, {{0, 1}, {1, 0}, {0, 2}}};
    tri.validate();
    const auto c = census(tri);
    CHECK(c.n_mutual == 1);
    CHECK(c.n_asym == 1);
    CHECK(c.n_null == 1);
    CHECK(c.s() == 3);
    CHECK(c.m() == 1);

    const auto empty = census(Network{5, {}});
    CHECK(empty.n_null == 10);
    CHECK(empty.s() == 0);

    Network complete{4, {}};
    for (std::int64_t i = 0; i < 4; ++i) {
        for (std::int64_t j = 0; j < 4; ++j) {
            if (i != j) complete.edges.emplace_back(i, j);
        }
    }
    const auto full = census(complete);
    CHECK(full.n_mutual == 6);
    CHECK(full.s() == 12);
    CHECK(full.m() == 6);
}

TEST_CASE("network validation rejects malformed graphs") {
    CHECK_THROWS_AS(Network({2, {{0, 0}}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(Network({2, {{0, 2}}}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(Network({2, {{0, 1}, {0, 1}}}).validate(), std::invalid_argument);
}

TEST_CASE("sampling requires at least one dyad") {
    CHECK_THROWS_AS(sample_census(NaturalParams(0.0), ModelVariant::baseline(true), 1, Seed{1}),
                    std::domain_error);
}

TEST_CASE("census sampling matches the dyad distribution mean") {
    // Uniform dyad states at alpha = beta = 0: E[n_mutual] = C(100,2)/4.
    const NaturalParams p(0.0, 0.0);
    const auto v = ModelVariant::baseline(true);
    const Seed master{1001};
    const int reps = 10000;
    double sum_mutual = 0.0;
    for (int r = 0; r < reps; ++r) {
        const auto c = sample_census(p, v, 100, master.derive(r));
        CHECK(c.dyads() == 4950);
        sum_mutual += static_cast<double>(c.n_mutual);
    }
    const double expected = 4950.0 / 4.0;
    const double se = std::sqrt(4950.0 * 0.25 * 0.75 / reps);
    CHECK(std::abs(sum_mutual / reps - expected) <= 3.0 * se);
}

TEST_CASE("a vanishing mutual-state probability never yields mutual dyads") {
    const NaturalParams p(0.0, -50.0);
    const auto v = ModelVariant::baseline(true);
    const Seed master{77};
    for (int r = 0; r < 2000; ++r) {
        CHECK(sample_census(p, v, 100, master.derive(r)).n_mutual == 0);
    }
}

TEST_CASE("census sampling passes a chi-square goodness-of-fit check") {
    // One draw with >= 1e5 dyads per variant; 3 collapsed states, df = 2,
    // critical value at p = 0.001 is -2 ln(0.001).
    const double critical = -2.0 * std::log(0.001);
    const std::int64_t n = 450;  // C(450,2) = 101,025 dyads
    const double pairs = 450.0 * 449.0 / 2.0;
    struct Case {
        NaturalParams params;
        ModelVariant variant;
    };
    const Case cases[] = {
        {NaturalParams(-1.0, 0.5), ModelVariant::baseline(true)},
        {NaturalParams(0.0, 0.0), ModelVariant::sparse_reciprocity()},
        {NaturalParams(0.5), ModelVariant::sparse_density()},
    };
    int idx = 0;
    for (const auto& [params, variant] : cases) {
        const auto d = dyad_distribution(params, variant, n);
        const auto c = sample_census(params, variant, n, Seed{500}.derive(idx++));
        const double exp_null = pairs * d.p_null;
        const double exp_asym = pairs * 2.0 * d.p_single;
        const double exp_mut = pairs * d.p_mutual;
        double chi2 = 0.0;
        chi2 += (c.n_null - exp_null) * (c.n_null - exp_null) / exp_null;
        chi2 += (c.n_asym - exp_asym) * (c.n_asym - exp_asym) / exp_asym;
        chi2 += (c.n_mutual - exp_mut) * (c.n_mutual - exp_mut) / exp_mut;
        CHECK(chi2 < critical);
    }
}

TEST_CASE("per-state frequencies stay within four binomial standard errors") {
    const std::int64_t n = 450;
    const double pairs = 450.0 * 449.0 / 2.0;
    const NaturalParams params(0.2, -0.3);
    int idx = 100;
    for (const auto& variant :
         {ModelVariant::baseline(true), ModelVariant::sparse_density_with_reciprocity(),
          ModelVariant::sparse_reciprocity()}) {
        const auto d = dyad_distribution(params, variant, n);
        const auto c = sample_census(params, variant, n, Seed{9000}.derive(idx++));
        const double probs[] = {d.p_null, 2.0 * d.p_single, d.p_mutual};
        const std::int64_t obs[] = {c.n_null, c.n_asym, c.n_mutual};
        for (int k = 0; k < 3; ++k) {
            const double se = std::sqrt(pairs * probs[k] * (1.0 - probs[k]));
            CHECK(std::abs(static_cast<double>(obs[k]) - pairs * probs[k]) <=
                  4.0 * se + 1.0);
        }
    }
}

TEST_CASE("network sampling reproduces its own census and stream") {
    const NaturalParams p(0.3, 0.4);
    const auto v = ModelVariant::sparse_reciprocity();
    const Seed seed{314159};

    const Network net = sample_network(p, v, 500, seed);
    net.validate();
    const auto from_net = census(net);
    const auto direct = sample_census(p, v, 500, seed);
    CHECK(from_net.n_null == direct.n_null);
    CHECK(from_net.n_asym == direct.n_asym);
    CHECK(from_net.n_mutual == direct.n_mutual);
}

TEST_CASE("sampling is deterministic given the seed") {
    const NaturalParams p(0.0, 0.2);
    const auto v = ModelVariant::sparse_reciprocity();
    const Network a = sample_network(p, v, 300, Seed{222});
    const Network b = sample_network(p, v, 300, Seed{222});
    CHECK(a.edges == b.edges);
    const Network c = sample_network(p, v, 300, Seed{223});
    CHECK(a.edges != c.edges);
}

TEST_CASE("vertex relabeling leaves the census invariant") {
    const Network net =
        sample_network(NaturalParams(0.1, 0.3), ModelVariant::sparse_reciprocity(), 200,
                       Seed{4});
    // Relabel v -> (v * 7 + 3) mod 200 (a bijection since gcd(7, 200) = 1).
    Network relabeled{200, {}};
    for (const auto& [from, to] : net.edges) {
        relabeled.edges.emplace_back((from * 7 + 3) % 200, (to * 7 + 3) % 200);
    }
    const auto c0 = census(net);
    const auto c1 = census(relabeled);
    CHECK(c0.n_null == c1.n_null);
    CHECK(c0.n_asym == c1.n_asym);
    CHECK(c0.n_mutual == c1.n_mutual);
}

TEST_CASE("mean out-degree of sparse Bernoulli networks matches the model") {
    const NaturalParams p(0.0);
    const auto v = ModelVariant::sparse_density();
    const std::int64_t n = 1000;
    const auto stats = expected_stats(p, v, n);
    const auto cov = stat_covariance(p, v, n);
    const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
    const double var_s = cov.aa * pairs * pairs;

    const int reps = 200;
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) {
        const Network net = sample_network(p, v, n, Seed{31000}.derive(r));
        sum += static_cast<double>(census(net).s());
    }
    const double mean_outdeg = sum / reps / static_cast<double>(n);
    const double se = std::sqrt(var_s / reps) / static_cast<double>(n);
    CHECK(std::abs(mean_outdeg - stats.s / static_cast<double>(n)) <= 3.0 * se);
}

TEST_CASE("out-degrees approach the Poisson limit") {
    const std::int64_t n = 2000;
    std::vector<std::int64_t> pooled;
    pooled.reserve(200 * n);
    for (int r = 0; r < 200; ++r) {
        const Network net =
            sample_network(NaturalParams(0.0), ModelVariant::sparse_density(), n,
                           Seed{52000}.derive(r));
        const auto deg = out_degrees(net);
        pooled.insert(pooled.end(), deg.begin(), deg.end());
    }
    CHECK(tv_to_poisson(pooled, 1.0) < 0.02);
}

TEST_CASE("per-vertex reciprocity stabilizes under the double offset") {
    const NaturalParams p(std::log(0.5), std::log(2.0));
    const auto v = ModelVariant::sparse_reciprocity();
    const double A = 0.5, B = 0.5;  // e^alpha and e^{2 alpha + beta}
    const std::int64_t n = 4000;

    const Network net = sample_network(p, v, n, Seed{606});
    const auto c = census(net);
    const double mean_outdeg = static_cast<double>(c.s()) / static_cast<double>(n);
    const double recip_per_vertex = 2.0 * static_cast<double>(c.m()) / static_cast<double>(n);
    CHECK(mean_outdeg == doctest::Approx(A + B).epsilon(0.10));
    CHECK(recip_per_vertex == doctest::Approx(B).epsilon(0.15));
}
