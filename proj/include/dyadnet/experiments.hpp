#ifndef DYADNET_EXPERIMENTS_HPP
#define DYADNET_EXPERIMENTS_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dyadnet/inference.hpp"
#include "dyadnet/model.hpp"
#include "dyadnet/rng.hpp"

namespace dyadnet {

/// Configuration of a Monte Carlo coverage study: per-vertex mean-value
/// targets, a grid of network sizes, nominal confidence levels, and the
/// replication budget.
struct CoverageConfig {
    std::string config_id = "coverage";
    MeanValueTargets targets;
    std::vector<std::int64_t> n_vertices_grid;
    std::vector<double> levels;
    std::int64_t replicates = 10000;
    Seed seed;
    ModelVariant variant = ModelVariant::sparse_reciprocity();
    int threads = 0;  // 0: DYADNET_THREADS env var, else hardware concurrency

    /// Throws std::invalid_argument on schema violations (replicates < 1,
    /// grid entries < 2, levels not strictly increasing in (0,1)).
    void validate() const;
};

/// Per-network-size results. Coverage is conditional on the MLE existing;
/// replicates with no MLE are counted, not silently dropped.
struct CoverageCell {
    std::int64_t n_vertices = 0;
    bool inverted = false;        // mean-value inversion succeeded
    std::string inversion_error;  // set when inverted == false
    double alpha_true = 0.0;
    double beta_true = 0.0;
    std::int64_t nonexistent = 0;
    std::int64_t replicates_used = 0;
    /// covered[level][0] counts alpha hits, [1] beta hits.
    std::vector<std::array<std::int64_t, 2>> covered;
    /// Sum of interval widths over used replicates (same indexing).
    std::vector<std::array<double, 2>> width_sum;

    double coverage(std::size_t level_idx, int param) const;
    double mean_width(std::size_t level_idx, int param) const;
    double nonexistence_rate() const;
};

struct CoverageReport {
    std::string config_id;
    std::string variant_name;
    bool reciprocity = true;
    std::vector<double> levels;
    std::int64_t replicates = 0;
    std::uint64_t master_seed = 0;
    std::vector<CoverageCell> cells;
};

/// Run the coverage study: for each grid size, invert the targets to the true
/// natural parameters, then repeatedly sample a census, fit, and record
/// whether each plug-in Wald interval covers the truth. Replicate r of grid
/// cell i uses stream seed.derive(i).derive(r); block-ordered reduction makes
/// the report identical for every thread count.
CoverageReport run_coverage(const CoverageConfig& config);

/// CSV with columns:
/// config_id,n_vertices,level,parameter,coverage,nonexistence_rate,replicates_used
/// One row per (size, level, parameter); sizes whose inversion failed emit
/// rows with an empty coverage field.
void write_coverage_csv(const CoverageReport& report, std::ostream& os);

/// Empirical check of the sparse-regime limit distribution: N_v Cov(theta_hat)
/// over replicates with existing MLE, next to the theoretical limit, plus the
/// mean bias of the estimates.
struct SamplingDistributionCheck {
    InfoMatrix empirical_cov_scaled;
    InfoMatrix theory_cov;
    double bias_alpha = 0.0;
    double bias_beta = 0.0;
    std::int64_t replicates_used = 0;
    std::int64_t nonexistent = 0;
};

SamplingDistributionCheck sampling_distribution_check(const NaturalParams& params,
                                                      const ModelVariant& variant,
                                                      std::int64_t n_vertices,
                                                      std::int64_t replicates,
                                                      Seed seed, int threads = 0);

/// Thread count resolution used by the harness (config value, DYADNET_THREADS,
/// hardware concurrency, in that order).
int resolve_threads(int requested);

}  // namespace dyadnet

#endif  // DYADNET_EXPERIMENTS_HPP
