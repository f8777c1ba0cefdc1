#include "dyadnet/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace dyadnet {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

bool skippable(const std::string& line) {
    const std::string t = trim(line);
    return t.empty() || t[0] == '#';
}

}  // namespace

ParseError::ParseError(const std::string& file, std::int64_t line, const std::string& what)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

std::int64_t VertexTable::level_index(const std::string& name) const {
    for (std::size_t i = 0; i < level_names.size(); ++i) {
        if (level_names[i] == name) return static_cast<std::int64_t>(i);
    }
    return -1;
}

VertexTable load_vertex_table(const std::string& vertex_path) {
    std::ifstream in(vertex_path);
    if (!in) throw std::runtime_error("cannot open vertex file: " + vertex_path);

    VertexTable table;
    std::string line;
    std::int64_t line_no = 0;
    bool header_seen = false;
    std::unordered_set<std::string> seen_ids;

    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        const auto fields = split_csv(line);
        if (!header_seen) {
            if (fields.empty() || fields[0] != "id") {
                throw ParseError(vertex_path, line_no, "header must start with 'id'");
            }
            table.level_names.assign(fields.begin() + 1, fields.end());
            table.labels.assign(table.level_names.size(), {});
            header_seen = true;
            continue;
        }
        if (fields.size() != table.level_names.size() + 1) {
            throw ParseError(vertex_path, line_no, "expected " +
                             std::to_string(table.level_names.size() + 1) + " fields");
        }
        if (fields[0].empty()) {
            throw ParseError(vertex_path, line_no, "empty vertex id");
        }
        if (!seen_ids.insert(fields[0]).second) {
            throw ParseError(vertex_path, line_no, "duplicate vertex id '" + fields[0] + "'");
        }
        table.ids.push_back(fields[0]);
        for (std::size_t c = 0; c < table.level_names.size(); ++c) {
            table.labels[c].push_back(fields[c + 1]);
        }
    }
    if (!header_seen) {
        throw ParseError(vertex_path, line_no == 0 ? 1 : line_no, "missing header row");
    }
    return table;
}

Network load_edges(const std::string& edge_path, const VertexTable& table,
                   std::int64_t* duplicates_collapsed) {
    std::ifstream in(edge_path);
    if (!in) throw std::runtime_error("cannot open edge file: " + edge_path);

    std::unordered_map<std::string, std::int64_t> index;
    index.reserve(table.ids.size() * 2);
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
        index.emplace(table.ids[i], static_cast<std::int64_t>(i));
    }

    Network net;
    net.n_vertices = static_cast<std::int64_t>(table.ids.size());
    std::unordered_set<std::uint64_t> seen;
    std::int64_t duplicates = 0;

    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        const std::string row = trim(line);
        auto sep = row.find_first_of("\t,");
        if (sep == std::string::npos) {
            throw ParseError(edge_path, line_no, "expected 'from<TAB or comma>to'");
        }
        const std::string from_id = trim(row.substr(0, sep));
        const std::string to_id = trim(row.substr(sep + 1));
        if (from_id.empty() || to_id.empty()) {
            throw ParseError(edge_path, line_no, "empty endpoint id");
        }
        const auto from_it = index.find(from_id);
        if (from_it == index.end()) {
            throw ParseError(edge_path, line_no, "unknown vertex id '" + from_id + "'");
        }
        const auto to_it = index.find(to_id);
        if (to_it == index.end()) {
            throw ParseError(edge_path, line_no, "unknown vertex id '" + to_id + "'");
        }
        if (from_it->second == to_it->second) {
            throw ParseError(edge_path, line_no, "self-loop on '" + from_id + "'");
        }
        const std::uint64_t key =
            static_cast<std::uint64_t>(from_it->second) *
                static_cast<std::uint64_t>(net.n_vertices) +
            static_cast<std::uint64_t>(to_it->second);
        if (!seen.insert(key).second) {
            ++duplicates;
            continue;
        }
        net.edges.emplace_back(from_it->second, to_it->second);
    }
    if (duplicates_collapsed) *duplicates_collapsed = duplicates;
    return net;
}

LoadedNetwork load_network(const std::string& edge_path, const std::string& vertex_path) {
    LoadedNetwork out;
    out.table = load_vertex_table(vertex_path);
    out.network = load_edges(edge_path, out.table, &out.duplicate_edges_collapsed);
    return out;
}

double SubnetworkExtraction::within_tie_fraction() const {
    return total_edges == 0
               ? 1.0
               : static_cast<double>(within_edges) / static_cast<double>(total_edges);
}

double SubnetworkExtraction::within_mutual_fraction() const {
    return total_mutual == 0
               ? 1.0
               : static_cast<double>(within_mutual) / static_cast<double>(total_mutual);
}

SubnetworkExtraction extract_subnetworks(const Network& network, const VertexTable& table,
                                         const std::string& level) {
    const std::int64_t col = table.level_index(level);
    if (col < 0) {
        throw std::invalid_argument("vertex table has no grouping column '" + level + "'");
    }
    if (static_cast<std::int64_t>(table.ids.size()) != network.n_vertices) {
        throw std::invalid_argument("vertex table size does not match the network");
    }
    const auto& labels = table.labels[static_cast<std::size_t>(col)];

    SubnetworkExtraction out;
    out.level = level;

    // Group vertices by label, in order of first appearance.
    std::unordered_map<std::string, std::size_t> group_of;
    for (std::int64_t v = 0; v < network.n_vertices; ++v) {
        const std::string& lab = labels[static_cast<std::size_t>(v)];
        auto [it, inserted] = group_of.emplace(lab, out.subnetworks.size());
        if (inserted) {
            out.subnetworks.push_back(Subnetwork{lab, Network{}, {}});
        }
        Subnetwork& sub = out.subnetworks[it->second];
        sub.original_vertices.push_back(v);
        ++sub.network.n_vertices;
    }

    std::vector<std::int64_t> local_index(static_cast<std::size_t>(network.n_vertices));
    for (const Subnetwork& sub : out.subnetworks) {
        for (std::size_t i = 0; i < sub.original_vertices.size(); ++i) {
            local_index[static_cast<std::size_t>(sub.original_vertices[i])] =
                static_cast<std::int64_t>(i);
        }
    }

    std::unordered_set<std::uint64_t> present;
    present.reserve(network.edges.size() * 2);
    for (const auto& [from, to] : network.edges) {
        present.insert(static_cast<std::uint64_t>(from) *
                           static_cast<std::uint64_t>(network.n_vertices) +
                       static_cast<std::uint64_t>(to));
    }

    for (const auto& [from, to] : network.edges) {
        ++out.total_edges;
        const std::string& lf = labels[static_cast<std::size_t>(from)];
        const std::string& lt = labels[static_cast<std::size_t>(to)];
        const bool reciprocated = present.count(
            static_cast<std::uint64_t>(to) * static_cast<std::uint64_t>(network.n_vertices) +
            static_cast<std::uint64_t>(from)) > 0;
        const bool count_mutual = reciprocated && from < to;  // one count per dyad
        if (count_mutual) ++out.total_mutual;
        if (lf == lt) {
            ++out.within_edges;
            if (count_mutual) ++out.within_mutual;
            Subnetwork& sub = out.subnetworks[group_of[lf]];
            sub.network.edges.emplace_back(local_index[static_cast<std::size_t>(from)],
                                           local_index[static_cast<std::size_t>(to)]);
        }
    }
    return out;
}

std::vector<SubnetFit> fit_subnetworks(const SubnetworkExtraction& extraction) {
    std::vector<SubnetFit> fits;
    fits.reserve(extraction.subnetworks.size());
    for (const Subnetwork& sub : extraction.subnetworks) {
        if (sub.network.n_vertices < 2) continue;  // no dyads to fit
        SubnetFit f;
        f.label = sub.label;
        f.level = extraction.level;
        f.n_vertices = sub.network.n_vertices;
        f.fit = fit_mle(census(sub.network), ModelVariant::baseline(true));
        f.within_tie_fraction = extraction.within_tie_fraction();
        f.within_mutual_fraction = extraction.within_mutual_fraction();
        fits.push_back(std::move(f));
    }
    return fits;
}

namespace {

RegressionResult ols(const std::vector<double>& x, const std::vector<double>& y) {
    const std::int64_t n = static_cast<std::int64_t>(x.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mean_x) * (x[i] - mean_x);
        sxy += (x[i] - mean_x) * (y[i] - mean_y);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument(
            "regime diagnostic: degenerate design (all subnetworks have the same size)");
    }
    const double slope = sxy / sxx;
    return RegressionResult{slope, mean_y - slope * mean_x, n};
}

}  // namespace

const char* RegimeDiagnostic::interpretation() {
    return "slopes of (alpha_hat, beta_hat) on log N_v near (0,0) indicate the "
           "baseline (constant-density) regime; near (-1,0) the sparse regime with "
           "vanishing reciprocity; near (-1,+1) the sparse regime with stable "
           "per-vertex reciprocity";
}

const char* RegimeDiagnostic::caveat() {
    return "overlapping subnetworks induce dependence among the fitted "
           "coefficients; the regression is descriptive and carries no formal "
           "significance test";
}

RegimeDiagnostic regime_diagnostic(const std::vector<SubnetFit>& fits) {
    std::vector<double> log_n, alpha, beta;
    std::int64_t excluded = 0;
    for (const SubnetFit& f : fits) {
        if (!f.fit.exists) {
            ++excluded;
            continue;
        }
        log_n.push_back(std::log(static_cast<double>(f.n_vertices)));
        alpha.push_back(f.fit.params->alpha);
        beta.push_back(f.fit.params->beta);
    }
    if (log_n.size() < 2) {
        throw std::invalid_argument(
            "regime diagnostic needs at least 2 subnetworks with an existing MLE");
    }

    RegimeDiagnostic diag;
    diag.alpha_on_log_n = ols(log_n, alpha);
    diag.beta_on_log_n = ols(log_n, beta);
    diag.excluded_nonexistent = excluded;

    const double sa = diag.alpha_on_log_n.slope;
    const double sb = diag.beta_on_log_n.slope;
    struct Signature {
        const char* name;
        double a, b;
    };
    static constexpr Signature signatures[] = {
        {"baseline", 0.0, 0.0},
        {"sparse-density", -1.0, 0.0},
        {"sparse-with-reciprocity", -1.0, 1.0},
    };
    double best = std::numeric_limits<double>::infinity();
    for (const Signature& sig : signatures) {
        const double d2 = (sa - sig.a) * (sa - sig.a) + (sb - sig.b) * (sb - sig.b);
        if (d2 < best) {
            best = d2;
            diag.verdict = sig.name;
        }
    }
    return diag;
}

namespace {

void put_double(std::ostream& os, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    os << buf;
}

}  // namespace

void write_subnet_fits_csv(const std::vector<SubnetFit>& fits, std::ostream& os) {
    os << "label,level,n_vertices,alpha_hat,beta_hat,se_alpha,se_beta,exists,"
          "within_tie_fraction,within_mutual_fraction\n";
    for (const SubnetFit& f : fits) {
        os << f.label << ',' << f.level << ',' << f.n_vertices << ',';
        if (f.fit.exists) {
            put_double(os, f.fit.params->alpha);
            os << ',';
            put_double(os, f.fit.params->beta);
            os << ',';
            put_double(os, f.fit.se_alpha);
            os << ',';
            put_double(os, f.fit.se_beta);
        } else {
            os << ",,,";
        }
        os << ',' << (f.fit.exists ? 1 : 0) << ',';
        put_double(os, f.within_tie_fraction);
        os << ',';
        put_double(os, f.within_mutual_fraction);
        os << '\n';
    }
}

void write_regression_csv(const RegimeDiagnostic& diagnostic, std::ostream& os) {
    os << "parameter,slope,intercept,n_points,excluded_nonexistent,verdict\n";
    os << "alpha,";
    put_double(os, diagnostic.alpha_on_log_n.slope);
    os << ',';
    put_double(os, diagnostic.alpha_on_log_n.intercept);
    os << ',' << diagnostic.alpha_on_log_n.n_points << ','
       << diagnostic.excluded_nonexistent << ',' << diagnostic.verdict << '\n';
    os << "beta,";
    put_double(os, diagnostic.beta_on_log_n.slope);
    os << ',';
    put_double(os, diagnostic.beta_on_log_n.intercept);
    os << ',' << diagnostic.beta_on_log_n.n_points << ','
       << diagnostic.excluded_nonexistent << ',' << diagnostic.verdict << '\n';
}

}  // namespace dyadnet
