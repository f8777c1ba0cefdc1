#include "dyadnet/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "dyadnet/sampler.hpp"

namespace dyadnet {

namespace {

constexpr std::int64_t kBlockSize = 4096;

// Runs fn(block_index, begin, end) over [0, total) split into fixed blocks.
// Blocks are claimed dynamically, so per-block outputs must be stored by
// block index and reduced in order afterwards.
template <typename Fn>
void for_each_block(std::int64_t total, int threads, Fn&& fn) {
    const std::int64_t n_blocks = (total + kBlockSize - 1) / kBlockSize;
    if (threads <= 1 || n_blocks <= 1) {
        for (std::int64_t blk = 0; blk < n_blocks; ++blk) {
            fn(blk, blk * kBlockSize, std::min(total, (blk + 1) * kBlockSize));
        }
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::int64_t blk = next.fetch_add(1);
            if (blk >= n_blocks) return;
            fn(blk, blk * kBlockSize, std::min(total, (blk + 1) * kBlockSize));
        }
    };
    std::vector<std::thread> pool;
    const int n_workers = static_cast<int>(
        std::min<std::int64_t>(threads, n_blocks));
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("DYADNET_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void CoverageConfig::validate() const {
    if (replicates < 1) {
        throw std::invalid_argument("coverage config: replicates must be >= 1");
    }
    if (n_vertices_grid.empty()) {
        throw std::invalid_argument("coverage config: empty n_vertices grid");
    }
    for (const auto n : n_vertices_grid) {
        if (n < 2) throw std::invalid_argument("coverage config: grid entries must be >= 2");
    }
    if (levels.empty()) {
        throw std::invalid_argument("coverage config: no confidence levels");
    }
    double prev = 0.0;
    for (const double level : levels) {
        if (!(level > prev && level < 1.0)) {
            throw std::invalid_argument(
                "coverage config: levels must be strictly increasing within (0, 1)");
        }
        prev = level;
    }
    if (variant.regime() == OffsetRegime::Baseline) {
        throw UnsupportedVariant(
            "coverage study uses the sparse plug-in intervals; baseline is not supported");
    }
    if (variant.regime() == OffsetRegime::SparseDensity && variant.reciprocity()) {
        throw UnsupportedVariant("sparse-density with reciprocity cannot be fit");
    }
}

double CoverageCell::coverage(std::size_t level_idx, int param) const {
    if (replicates_used == 0) return std::nan("");
    return static_cast<double>(covered[level_idx][static_cast<std::size_t>(param)]) /
           static_cast<double>(replicates_used);
}

double CoverageCell::mean_width(std::size_t level_idx, int param) const {
    if (replicates_used == 0) return std::nan("");
    return width_sum[level_idx][static_cast<std::size_t>(param)] /
           static_cast<double>(replicates_used);
}

double CoverageCell::nonexistence_rate() const {
    const std::int64_t total = replicates_used + nonexistent;
    return total == 0 ? 0.0 : static_cast<double>(nonexistent) / static_cast<double>(total);
}

CoverageReport run_coverage(const CoverageConfig& config) {
    config.validate();
    const int threads = resolve_threads(config.threads);
    const std::size_t n_levels = config.levels.size();

    CoverageReport report;
    report.config_id = config.config_id;
    report.variant_name = config.variant.name();
    report.reciprocity = config.variant.reciprocity();
    report.levels = config.levels;
    report.replicates = config.replicates;
    report.master_seed = config.seed.master;

    for (std::size_t cell_idx = 0; cell_idx < config.n_vertices_grid.size(); ++cell_idx) {
        const std::int64_t n = config.n_vertices_grid[cell_idx];
        CoverageCell cell;
        cell.n_vertices = n;
        cell.covered.assign(n_levels, {0, 0});
        cell.width_sum.assign(n_levels, {0.0, 0.0});

        NaturalParams truth(0.0, 0.0);
        try {
            truth = mean_value_to_natural(config.targets, n, config.variant);
        } catch (const std::exception& e) {
            cell.inversion_error = e.what();
            report.cells.push_back(std::move(cell));
            continue;  // per-cell missing entry, not a global abort
        }
        cell.inverted = true;
        cell.alpha_true = truth.alpha;
        cell.beta_true = truth.beta;

        struct BlockPartial {
            std::int64_t nonexistent = 0;
            std::int64_t used = 0;
            std::vector<std::array<std::int64_t, 2>> covered;
            std::vector<std::array<double, 2>> width_sum;
        };
        const std::int64_t n_blocks = (config.replicates + kBlockSize - 1) / kBlockSize;
        std::vector<BlockPartial> partials(static_cast<std::size_t>(n_blocks));

        const Seed cell_seed = config.seed.derive(cell_idx);
        for_each_block(
            config.replicates, threads,
            [&](std::int64_t blk, std::int64_t begin, std::int64_t end) {
                BlockPartial& part = partials[static_cast<std::size_t>(blk)];
                part.covered.assign(n_levels, {0, 0});
                part.width_sum.assign(n_levels, {0.0, 0.0});
                for (std::int64_t r = begin; r < end; ++r) {
                    const Seed stream = cell_seed.derive(static_cast<std::uint64_t>(r));
                    const DyadCensus draw =
                        sample_census(truth, config.variant, n, stream);
                    const FitResult fit = fit_mle(draw, config.variant);
                    if (!fit.exists) {
                        ++part.nonexistent;
                        continue;
                    }
                    ++part.used;
                    for (std::size_t li = 0; li < n_levels; ++li) {
                        const WaldIntervals ci = wald_ci(fit, config.levels[li]);
                        part.covered[li][0] += ci.alpha.contains(truth.alpha) ? 1 : 0;
                        part.width_sum[li][0] += ci.alpha.width();
                        if (ci.beta) {
                            part.covered[li][1] += ci.beta->contains(truth.beta) ? 1 : 0;
                            part.width_sum[li][1] += ci.beta->width();
                        }
                    }
                }
            });

        // Block-ordered reduction: identical floating-point sums for any
        // thread count.
        for (const BlockPartial& part : partials) {
            cell.nonexistent += part.nonexistent;
            cell.replicates_used += part.used;
            for (std::size_t li = 0; li < n_levels; ++li) {
                cell.covered[li][0] += part.covered[li][0];
                cell.covered[li][1] += part.covered[li][1];
                cell.width_sum[li][0] += part.width_sum[li][0];
                cell.width_sum[li][1] += part.width_sum[li][1];
            }
        }
        report.cells.push_back(std::move(cell));
    }
    return report;
}

void write_coverage_csv(const CoverageReport& report, std::ostream& os) {
    os << "config_id,n_vertices,level,parameter,coverage,nonexistence_rate,"
          "replicates_used\n";
    char buf[128];
    const int n_params = report.reciprocity ? 2 : 1;
    for (const CoverageCell& cell : report.cells) {
        for (std::size_t li = 0; li < report.levels.size(); ++li) {
            for (int param = 0; param < n_params; ++param) {
                os << report.config_id << ',' << cell.n_vertices << ',';
                std::snprintf(buf, sizeof buf, "%.6g", report.levels[li]);
                os << buf << ',' << (param == 0 ? "alpha" : "beta") << ',';
                if (cell.inverted && cell.replicates_used > 0) {
                    std::snprintf(buf, sizeof buf, "%.6f", cell.coverage(li, param));
                    os << buf;
                }
                os << ',';
                std::snprintf(buf, sizeof buf, "%.6f", cell.nonexistence_rate());
                os << buf << ',' << cell.replicates_used << '\n';
            }
        }
    }
}

SamplingDistributionCheck sampling_distribution_check(const NaturalParams& params,
                                                      const ModelVariant& variant,
                                                      std::int64_t n_vertices,
                                                      std::int64_t replicates,
                                                      Seed seed, int threads) {
    if (!variant.is_sparse()) {
        throw UnsupportedVariant("sampling_distribution_check applies to sparse variants");
    }
    if (replicates < 1000) {
        throw std::invalid_argument("sampling_distribution_check needs >= 1000 replicates");
    }

    struct Moments {
        std::int64_t used = 0;
        std::int64_t nonexistent = 0;
        double sum_a = 0.0, sum_b = 0.0;
        double sum_aa = 0.0, sum_ab = 0.0, sum_bb = 0.0;
    };
    const std::int64_t n_blocks = (replicates + kBlockSize - 1) / kBlockSize;
    std::vector<Moments> partials(static_cast<std::size_t>(n_blocks));

    for_each_block(replicates, resolve_threads(threads),
                   [&](std::int64_t blk, std::int64_t begin, std::int64_t end) {
                       Moments& m = partials[static_cast<std::size_t>(blk)];
                       for (std::int64_t r = begin; r < end; ++r) {
                           const Seed stream = seed.derive(static_cast<std::uint64_t>(r));
                           const DyadCensus draw =
                               sample_census(params, variant, n_vertices, stream);
                           const FitResult fit = fit_mle(draw, variant);
                           if (!fit.exists) {
                               ++m.nonexistent;
                               continue;
                           }
                           ++m.used;
                           const double a = fit.params->alpha;
                           const double b = fit.params->beta;
                           m.sum_a += a;
                           m.sum_b += b;
                           m.sum_aa += a * a;
                           m.sum_ab += a * b;
                           m.sum_bb += b * b;
                       }
                   });

    Moments total;
    for (const Moments& m : partials) {
        total.used += m.used;
        total.nonexistent += m.nonexistent;
        total.sum_a += m.sum_a;
        total.sum_b += m.sum_b;
        total.sum_aa += m.sum_aa;
        total.sum_ab += m.sum_ab;
        total.sum_bb += m.sum_bb;
    }
    if (total.used < 2) {
        throw std::runtime_error("sampling_distribution_check: no replicates had an MLE");
    }

    const double n_used = static_cast<double>(total.used);
    const double mean_a = total.sum_a / n_used;
    const double mean_b = total.sum_b / n_used;
    const double scale = static_cast<double>(n_vertices) / (n_used - 1.0);

    SamplingDistributionCheck out;
    out.empirical_cov_scaled =
        InfoMatrix{scale * (total.sum_aa - n_used * mean_a * mean_a),
                   scale * (total.sum_ab - n_used * mean_a * mean_b),
                   scale * (total.sum_bb - n_used * mean_b * mean_b)};
    out.theory_cov = asymptotic_covariance(params, variant);
    out.bias_alpha = mean_a - params.alpha;
    out.bias_beta = mean_b - params.beta;
    out.replicates_used = total.used;
    out.nonexistent = total.nonexistent;
    return out;
}

}  // namespace dyadnet
