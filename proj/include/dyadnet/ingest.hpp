#ifndef DYADNET_INGEST_HPP
#define DYADNET_INGEST_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dyadnet/inference.hpp"
#include "dyadnet/sampler.hpp"

namespace dyadnet {

/// Parse failure with the offending file and 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, std::int64_t line, const std::string& what);
    std::int64_t line() const { return line_; }

private:
    std::int64_t line_;
};

/// Vertex ids (row order defines the 0-based vertex index) plus zero or more
/// grouping columns, e.g. village / ward / neighborhood labels.
struct VertexTable {
    std::vector<std::string> ids;
    std::vector<std::string> level_names;
    /// labels[level][vertex]
    std::vector<std::vector<std::string>> labels;

    std::int64_t level_index(const std::string& name) const;  // -1 if absent
};

struct LoadedNetwork {
    Network network;
    VertexTable table;
    std::int64_t duplicate_edges_collapsed = 0;
};

/// Read a directed edge list (one `from<TAB or comma>to` per line, `#`
/// comments ignored) against a vertex file (header `id,<level1>,...`).
/// Unknown endpoints, malformed rows, duplicate vertex ids and self-loops
/// raise ParseError with the line number; duplicate edges are collapsed and
/// counted.
LoadedNetwork load_network(const std::string& edge_path, const std::string& vertex_path);

VertexTable load_vertex_table(const std::string& vertex_path);
Network load_edges(const std::string& edge_path, const VertexTable& table,
                   std::int64_t* duplicates_collapsed);

struct Subnetwork {
    std::string label;
    Network network;
    std::vector<std::int64_t> original_vertices;  // subnet index -> parent index
};

/// Induced subgraphs for one grouping level, plus the level-wide fraction of
/// ties (and of mutual dyads) that fall within a subdivision. Fractions are 1
/// when the network has no ties (resp. no mutual dyads).
struct SubnetworkExtraction {
    std::string level;
    std::vector<Subnetwork> subnetworks;
    std::int64_t total_edges = 0;
    std::int64_t within_edges = 0;
    std::int64_t total_mutual = 0;
    std::int64_t within_mutual = 0;

    double within_tie_fraction() const;
    double within_mutual_fraction() const;
};

SubnetworkExtraction extract_subnetworks(const Network& network, const VertexTable& table,
                                         const std::string& level);

struct SubnetFit {
    std::string label;
    std::string level;
    std::int64_t n_vertices = 0;
    FitResult fit;
    double within_tie_fraction = 1.0;
    double within_mutual_fraction = 1.0;
};

/// Fit the baseline reciprocity model to every subnetwork of an extraction.
std::vector<SubnetFit> fit_subnetworks(const SubnetworkExtraction& extraction);

struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    std::int64_t n_points = 0;
};

/// Scaling-regime diagnostic: OLS of alpha_hat and of beta_hat on log N_v
/// over the fits whose MLE exists, and the nearest of the three slope
/// signatures (0,0), (-1,0), (-1,+1).
struct RegimeDiagnostic {
    RegressionResult alpha_on_log_n;
    RegressionResult beta_on_log_n;
    std::int64_t excluded_nonexistent = 0;
    std::string verdict;  // "baseline" | "sparse-density" | "sparse-with-reciprocity"

    /// The three-way interpretation rule, reported verbatim alongside results.
    static const char* interpretation();
    /// Dependence caveat for overlapping subnetworks, reported verbatim.
    static const char* caveat();
};

RegimeDiagnostic regime_diagnostic(const std::vector<SubnetFit>& fits);

/// CSV writers for the subnets pipeline.
void write_subnet_fits_csv(const std::vector<SubnetFit>& fits, std::ostream& os);
void write_regression_csv(const RegimeDiagnostic& diagnostic, std::ostream& os);

}  // namespace dyadnet

#endif  // DYADNET_INGEST_HPP
