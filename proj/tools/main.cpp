// Command-line front end: simulate / fit / coverage / subnets.
//
// Exit codes: 0 success (a missing MLE is a reported outcome, not a failure),
// 2 usage or configuration error, 3 I/O or parse error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "dyadnet/experiments.hpp"
#include "dyadnet/inference.hpp"
#include "dyadnet/ingest.hpp"
#include "dyadnet/model.hpp"
#include "dyadnet/sampler.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dyadnet;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

void write_manifest(const fs::path& path, const std::string& subcommand,
                    const json& config, const std::vector<std::string>& outputs) {
    json manifest{{"artifact", "dyadnet"},
                  {"version", kVersion},
                  {"subcommand", subcommand},
                  {"timestamp_utc", utc_timestamp()},
                  {"config", config},
                  {"outputs", outputs}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path.string());
    out << manifest.dump(2) << '\n';
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path.string());
    return out;
}

std::uint64_t fresh_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

ModelVariant resolve_variant(const std::string& name, std::optional<bool> reciprocity_flag,
                             bool beta_supplied) {
    bool reciprocity;
    if (reciprocity_flag.has_value()) {
        reciprocity = *reciprocity_flag;
    } else if (name == "sparse-density") {
        reciprocity = beta_supplied;  // scalar model unless beta is requested
    } else {
        reciprocity = true;
    }
    return ModelVariant::parse(name, reciprocity);
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
    std::int64_t n = 0;
    std::optional<double> alpha, beta;
    std::optional<double> mean_degree, mutuals_per_vertex;
    std::string variant = "baseline";
    std::optional<bool> reciprocity;
    std::optional<std::uint64_t> seed;
    std::string out_prefix = "network";
};

int run_simulate(const SimulateOptions& opt) {
    if (opt.alpha.has_value() == opt.mean_degree.has_value()) {
        std::cerr << "simulate: specify either --alpha [--beta] or --mean-degree "
                     "[--mutuals-per-vertex]\n";
        return 2;
    }
    const ModelVariant variant = resolve_variant(
        opt.variant, opt.reciprocity,
        opt.beta.has_value() || opt.mutuals_per_vertex.has_value());

    NaturalParams params(0.0, 0.0);
    if (opt.alpha) {
        params = NaturalParams(*opt.alpha, opt.beta.value_or(0.0));
    } else {
        const MeanValueTargets targets(*opt.mean_degree,
                                       opt.mutuals_per_vertex.value_or(0.0));
        params = mean_value_to_natural(targets, opt.n, variant);
    }

    const std::uint64_t seed = opt.seed.value_or(fresh_seed());
    if (!opt.seed) std::cout << "seed: " << seed << "\n";

    const Network net = sample_network(params, variant, opt.n, Seed{seed});
    const DyadCensus c = census(net);

    const fs::path edges_path = opt.out_prefix + ".edges.csv";
    const fs::path vertices_path = opt.out_prefix + ".vertices.csv";
    {
        auto out = open_output(edges_path);
        out << "# directed edge list: from,to\n";
        for (const auto& [from, to] : net.edges) out << from << ',' << to << '\n';
    }
    {
        auto out = open_output(vertices_path);
        out << "id\n";
        for (std::int64_t v = 0; v < net.n_vertices; ++v) out << v << '\n';
    }
    write_manifest(opt.out_prefix + ".manifest.json", "simulate",
                   json{{"n_vertices", opt.n},
                        {"alpha", params.alpha},
                        {"beta", params.beta},
                        {"variant", variant.name()},
                        {"reciprocity", variant.reciprocity()},
                        {"seed", seed}},
                   {edges_path.string(), vertices_path.string()});

    char line[200];
    std::snprintf(line, sizeof line,
                  "n_vertices=%lld s=%lld m=%lld mean_outdegree=%.6f alpha=%.6f beta=%.6f",
                  static_cast<long long>(net.n_vertices), static_cast<long long>(c.s()),
                  static_cast<long long>(c.m()),
                  static_cast<double>(c.s()) / static_cast<double>(net.n_vertices),
                  params.alpha, params.beta);
    std::cout << line << "\n";
    std::cout << "wrote " << edges_path.string() << ", " << vertices_path.string() << "\n";
    return 0;
}

// --------------------------------------------------------------------- fit

struct FitOptions {
    std::string edges_path;
    std::optional<std::string> vertices_path;
    std::optional<std::int64_t> n_override;
    std::string variant = "baseline";
    std::optional<bool> reciprocity;
    double level = 0.95;
    std::string out_prefix = "fit";
};

// Edge list without a vertex file: endpoints must be non-negative integers.
Network load_integer_edges(const std::string& path, std::optional<std::int64_t> n_override) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge file: " + path);
    std::vector<std::pair<std::int64_t, std::int64_t>> edges;
    std::int64_t max_id = -1;
    std::string line;
    std::int64_t line_no = 0;
    auto parse_id = [&](const std::string& field) {
        try {
            std::size_t pos = 0;
            const std::int64_t id = std::stoll(field, &pos);
            if (pos != field.size() || id < 0) throw std::invalid_argument(field);
            return id;
        } catch (const std::exception&) {
            throw ParseError(path, line_no,
                             "vertex id '" + field +
                                 "' is not a non-negative integer "
                                 "(supply --vertices for string ids)");
        }
    };
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = trim(line);
        if (row.empty() || row[0] == '#') continue;
        const auto sep = row.find_first_of("\t,");
        if (sep == std::string::npos) {
            throw ParseError(path, line_no, "expected 'from<TAB or comma>to'");
        }
        const std::int64_t from = parse_id(trim(row.substr(0, sep)));
        const std::int64_t to = parse_id(trim(row.substr(sep + 1)));
        if (from == to) throw ParseError(path, line_no, "self-loop");
        edges.emplace_back(from, to);
        max_id = std::max({max_id, from, to});
    }
    Network net{n_override.value_or(max_id + 1), {}};
    std::unordered_set<std::uint64_t> seen;
    for (const auto& [from, to] : edges) {
        if (from >= net.n_vertices || to >= net.n_vertices) {
            throw std::invalid_argument("edge endpoint exceeds --n");
        }
        const std::uint64_t key = static_cast<std::uint64_t>(from) *
                                      static_cast<std::uint64_t>(net.n_vertices) +
                                  static_cast<std::uint64_t>(to);
        if (!seen.insert(key).second) continue;  // collapse duplicates
        net.edges.emplace_back(from, to);
    }
    return net;
}

void print_fit_summary(const FitResult& fit, const DyadCensus& c, double level,
                       const std::optional<WaldIntervals>& ci,
                       const std::string& ci_method) {
    std::cout << "n_vertices: " << c.n_vertices << "  dyads: " << c.dyads()
              << "  s: " << c.s() << "  m: " << c.m() << "\n";
    std::cout << "variant: " << fit.variant.name()
              << (fit.variant.reciprocity() ? "" : " (no reciprocity)") << "\n";
    if (!fit.exists) {
        std::cout << "MLE does not exist: the sufficient statistics lie on the "
                     "boundary of their attainable region\n";
        return;
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "alpha_hat: %.6f  (se %.6f)", fit.params->alpha,
                  fit.se_alpha);
    std::cout << buf << "\n";
    if (fit.variant.reciprocity()) {
        std::snprintf(buf, sizeof buf, "beta_hat:  %.6f  (se %.6f)", fit.params->beta,
                      fit.se_beta);
        std::cout << buf << "\n";
    }
    if (ci) {
        std::snprintf(buf, sizeof buf, "%.0f%% CI alpha: [%.6f, %.6f]  (%s)", level * 100.0,
                      ci->alpha.lower, ci->alpha.upper, ci_method.c_str());
        std::cout << buf << "\n";
        if (ci->beta) {
            std::snprintf(buf, sizeof buf, "%.0f%% CI beta:  [%.6f, %.6f]  (%s)",
                          level * 100.0, ci->beta->lower, ci->beta->upper,
                          ci_method.c_str());
            std::cout << buf << "\n";
        }
    }
}

int run_fit(const FitOptions& opt) {
    Network net;
    if (opt.vertices_path) {
        net = load_network(opt.edges_path, *opt.vertices_path).network;
    } else {
        net = load_integer_edges(opt.edges_path, opt.n_override);
    }
    const ModelVariant variant = resolve_variant(opt.variant, opt.reciprocity, false);
    const DyadCensus c = census(net);
    const FitResult fit = fit_mle(c, variant);

    std::optional<WaldIntervals> ci;
    std::string ci_method;
    if (fit.exists) {
        if (variant.is_sparse()) {
            ci = wald_ci(fit, opt.level);
            ci_method = "sparse plug-in";
        } else {
            ci = wald_ci_observed(fit, opt.level);
            ci_method = "observed information";
        }
    }
    print_fit_summary(fit, c, opt.level, ci, ci_method);

    const fs::path csv_path = opt.out_prefix + ".fit.csv";
    {
        auto out = open_output(csv_path);
        out << "n_vertices,variant,reciprocity,exists,alpha_hat,beta_hat,se_alpha,"
               "se_beta,level,ci_alpha_lower,ci_alpha_upper,ci_beta_lower,"
               "ci_beta_upper,ci_method\n";
        out << c.n_vertices << ',' << variant.name() << ',' << variant.reciprocity() << ','
            << fit.exists << ',';
        char buf[64];
        auto put = [&](double v) {
            std::snprintf(buf, sizeof buf, "%.9g", v);
            out << buf;
        };
        if (fit.exists) {
            put(fit.params->alpha);
            out << ',';
            put(fit.params->beta);
            out << ',';
            put(fit.se_alpha);
            out << ',';
            put(fit.se_beta);
        } else {
            out << ",,,";
        }
        out << ',';
        put(opt.level);
        if (ci) {
            out << ',';
            put(ci->alpha.lower);
            out << ',';
            put(ci->alpha.upper);
            out << ',';
            if (ci->beta) {
                put(ci->beta->lower);
                out << ',';
                put(ci->beta->upper);
            } else {
                out << ',';
            }
        } else {
            out << ",,,,";
        }
        out << ',' << ci_method << '\n';
    }
    write_manifest(opt.out_prefix + ".manifest.json", "fit",
                   json{{"edges", opt.edges_path},
                        {"vertices", opt.vertices_path.value_or("")},
                        {"variant", variant.name()},
                        {"reciprocity", variant.reciprocity()},
                        {"level", opt.level}},
                   {csv_path.string()});
    std::cout << "wrote " << csv_path.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------- coverage

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string token;
    for (const char ch : value) {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!token.empty()) out.push_back(token);
            token.clear();
        } else {
            token.push_back(ch);
        }
    }
    if (!token.empty()) out.push_back(token);
    return out;
}

// Flat key = value configuration; see the README for the grammar.
CoverageConfig parse_coverage_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);

    std::unordered_map<std::string, std::string> kv;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path, line_no, "expected 'key = value'");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ParseError(path, line_no, "empty key or value");
        }
        if (!kv.emplace(key, value).second) {
            throw ParseError(path, line_no, "duplicate key '" + key + "'");
        }
    }

    static const char* known[] = {"config_id",  "variant",          "mean_degree",
                                  "mutuals_per_vertex", "n_vertices", "n_vertices_range",
                                  "levels",     "replicates",       "seed",
                                  "threads"};
    for (const auto& [key, value] : kv) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw std::invalid_argument("coverage config: unknown key '" + key + "'");
    }
    auto require = [&](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) {
            throw std::invalid_argument(std::string("coverage config: missing key '") + key +
                                        "'");
        }
        return it->second;
    };

    const std::string variant_name = require("variant");
    const bool reciprocity = variant_name != "sparse-density";
    const double mean_degree = std::stod(require("mean_degree"));
    const double mutuals =
        kv.count("mutuals_per_vertex") ? std::stod(kv.at("mutuals_per_vertex")) : 0.0;

    CoverageConfig cfg{.config_id = require("config_id"),
                       .targets = MeanValueTargets(mean_degree, mutuals),
                       .n_vertices_grid = {},
                       .levels = {},
                       .replicates = std::stoll(require("replicates")),
                       .seed = Seed{std::stoull(require("seed"))},
                       .variant = ModelVariant::parse(variant_name, reciprocity),
                       .threads = kv.count("threads") ? std::stoi(kv.at("threads")) : 0};

    if (kv.count("n_vertices")) {
        for (const auto& tok : split_list(kv.at("n_vertices"))) {
            cfg.n_vertices_grid.push_back(std::stoll(tok));
        }
    }
    if (kv.count("n_vertices_range")) {
        const std::string& spec = kv.at("n_vertices_range");
        const auto colon = spec.find(':');
        const auto colon2 = spec.find(':', colon + 1);
        if (colon == std::string::npos || colon2 == std::string::npos) {
            throw std::invalid_argument(
                "coverage config: n_vertices_range must be start:stop:step");
        }
        const std::int64_t start = std::stoll(spec.substr(0, colon));
        const std::int64_t stop = std::stoll(spec.substr(colon + 1, colon2 - colon - 1));
        const std::int64_t step = std::stoll(spec.substr(colon2 + 1));
        if (step <= 0) throw std::invalid_argument("coverage config: step must be positive");
        for (std::int64_t n = start; n <= stop; n += step) cfg.n_vertices_grid.push_back(n);
    }
    for (const auto& tok : split_list(require("levels"))) {
        cfg.levels.push_back(std::stod(tok));
    }
    cfg.validate();
    return cfg;
}

void print_coverage_table(const CoverageReport& report) {
    std::cout << "coverage (config " << report.config_id << ", variant "
              << report.variant_name << ", replicates " << report.replicates << ", seed "
              << report.master_seed << ")\n";
    std::cout << "  N_v";
    for (const double level : report.levels) {
        char head[48];
        if (report.reciprocity) {
            std::snprintf(head, sizeof head, "  %4.0f%%[a]  %4.0f%%[b]", level * 100.0,
                          level * 100.0);
        } else {
            std::snprintf(head, sizeof head, "  %4.0f%%[a]", level * 100.0);
        }
        std::cout << head;
    }
    std::cout << "  no-MLE\n";
    for (const auto& cell : report.cells) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%5lld", static_cast<long long>(cell.n_vertices));
        std::cout << buf;
        if (!cell.inverted) {
            std::cout << "  (targets not attainable: " << cell.inversion_error << ")\n";
            continue;
        }
        for (std::size_t li = 0; li < report.levels.size(); ++li) {
            std::snprintf(buf, sizeof buf, "  %7.4f", cell.coverage(li, 0));
            std::cout << buf;
            if (report.reciprocity) {
                std::snprintf(buf, sizeof buf, "  %7.4f", cell.coverage(li, 1));
                std::cout << buf;
            }
        }
        std::snprintf(buf, sizeof buf, "  %6.4f", cell.nonexistence_rate());
        std::cout << buf << "\n";
    }
}

int run_coverage_cmd(const std::string& config_path, const std::string& out_dir,
                     int threads_override) {
    CoverageConfig cfg = parse_coverage_config(config_path);
    if (threads_override > 0) cfg.threads = threads_override;

    const CoverageReport report = run_coverage(cfg);

    fs::create_directories(out_dir);
    const fs::path csv_path = fs::path(out_dir) / (cfg.config_id + ".coverage.csv");
    {
        auto out = open_output(csv_path);
        write_coverage_csv(report, out);
    }
    json grid = json::array();
    for (const auto n : cfg.n_vertices_grid) grid.push_back(n);
    json levels = json::array();
    for (const auto level : cfg.levels) levels.push_back(level);
    write_manifest(fs::path(out_dir) / (cfg.config_id + ".manifest.json"), "coverage",
                   json{{"config_file", config_path},
                        {"config_id", cfg.config_id},
                        {"variant", cfg.variant.name()},
                        {"reciprocity", cfg.variant.reciprocity()},
                        {"mean_degree", cfg.targets.edges_per_vertex},
                        {"mutuals_per_vertex", cfg.targets.mutuals_per_vertex},
                        {"n_vertices", grid},
                        {"levels", levels},
                        {"replicates", cfg.replicates},
                        {"seed", cfg.seed.master}},
                   {csv_path.string()});

    print_coverage_table(report);
    std::cout << "wrote " << csv_path.string() << "\n";
    return 0;
}

// ----------------------------------------------------------------- subnets

int run_subnets(const std::string& edges_path, const std::string& vertices_path,
                std::vector<std::string> levels, const std::string& out_prefix) {
    const LoadedNetwork loaded = load_network(edges_path, vertices_path);
    if (loaded.duplicate_edges_collapsed > 0) {
        std::cout << "note: collapsed " << loaded.duplicate_edges_collapsed
                  << " duplicate edges\n";
    }
    if (levels.empty()) levels = loaded.table.level_names;
    if (levels.empty()) {
        std::cerr << "subnets: the vertex table has no grouping columns\n";
        return 2;
    }

    std::vector<SubnetFit> fits;
    // The whole network is one of the regression points.
    {
        SubnetFit whole;
        whole.label = "(whole)";
        whole.level = "(whole)";
        whole.n_vertices = loaded.network.n_vertices;
        whole.fit = fit_mle(census(loaded.network), ModelVariant::baseline(true));
        whole.within_tie_fraction = 1.0;
        whole.within_mutual_fraction = 1.0;
        fits.push_back(std::move(whole));
    }
    for (const auto& level : levels) {
        const auto extraction = extract_subnetworks(loaded.network, loaded.table, level);
        auto level_fits = fit_subnetworks(extraction);
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "level %s: %zu subdivisions, within-tie fraction %.4f, "
                      "within-mutual fraction %.4f",
                      level.c_str(), extraction.subnetworks.size(),
                      extraction.within_tie_fraction(),
                      extraction.within_mutual_fraction());
        std::cout << buf << "\n";
        fits.insert(fits.end(), level_fits.begin(), level_fits.end());
    }

    const RegimeDiagnostic diag = regime_diagnostic(fits);

    const fs::path fits_path = out_prefix + ".fits.csv";
    const fs::path reg_path = out_prefix + ".regression.csv";
    {
        auto out = open_output(fits_path);
        write_subnet_fits_csv(fits, out);
    }
    {
        auto out = open_output(reg_path);
        write_regression_csv(diag, out);
    }
    json level_list = json::array();
    for (const auto& level : levels) level_list.push_back(level);
    write_manifest(out_prefix + ".manifest.json", "subnets",
                   json{{"edges", edges_path},
                        {"vertices", vertices_path},
                        {"levels", level_list}},
                   {fits_path.string(), reg_path.string()});

    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "slope(alpha_hat on log N_v) = %+.4f   slope(beta_hat on log N_v) = "
                  "%+.4f   (%lld fits, %lld without MLE excluded)",
                  diag.alpha_on_log_n.slope, diag.beta_on_log_n.slope,
                  static_cast<long long>(diag.alpha_on_log_n.n_points),
                  static_cast<long long>(diag.excluded_nonexistent));
    std::cout << buf << "\n";
    std::cout << "verdict: " << diag.verdict << "\n";
    std::cout << "rule: " << RegimeDiagnostic::interpretation() << "\n";
    std::cout << "caveat: " << RegimeDiagnostic::caveat() << "\n";
    std::cout << "wrote " << fits_path.string() << ", " << reg_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dyad-independent network models: exact sampling, closed-form "
                 "maximum likelihood, Wald intervals, coverage experiments"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate =
        app.add_subcommand("simulate", "sample a network and write an edge list");
    simulate->add_option("--n", sim.n, "number of vertices")->required();
    auto* alpha_opt = simulate->add_option("--alpha", sim.alpha, "density parameter");
    simulate->add_option("--beta", sim.beta, "reciprocity parameter")->needs(alpha_opt);
    auto* md_opt = simulate->add_option("--mean-degree", sim.mean_degree,
                                        "target E[s]/N_v (mean-value parameterization)");
    simulate->add_option("--mutuals-per-vertex", sim.mutuals_per_vertex, "target E[m]/N_v")
        ->needs(md_opt);
    simulate
        ->add_option("--variant", sim.variant, "baseline | sparse-density | sparse-recip")
        ->check(CLI::IsMember({"baseline", "sparse-density", "sparse-recip"}));
    simulate->add_flag(
        "--reciprocity,!--no-reciprocity",
        [&sim](std::int64_t count) { sim.reciprocity = count > 0; },
        "force the reciprocity parameter on/off");
    simulate->add_option("--seed", sim.seed, "master seed (printed if omitted)");
    simulate->add_option("--out", sim.out_prefix, "output prefix")->required();

    FitOptions fit;
    auto* fit_cmd = app.add_subcommand("fit", "fit a model to an edge list");
    fit_cmd->add_option("edges", fit.edges_path, "edge list file")->required();
    fit_cmd->add_option("--vertices", fit.vertices_path, "vertex table (string ids)");
    fit_cmd->add_option("--n", fit.n_override, "vertex count when no vertex file is given");
    fit_cmd->add_option("--variant", fit.variant, "baseline | sparse-density | sparse-recip")
        ->check(CLI::IsMember({"baseline", "sparse-density", "sparse-recip"}));
    fit_cmd->add_flag(
        "--reciprocity,!--no-reciprocity",
        [&fit](std::int64_t count) { fit.reciprocity = count > 0; },
        "force the reciprocity parameter on/off");
    fit_cmd->add_option("--level", fit.level, "confidence level (default 0.95)");
    fit_cmd->add_option("--out", fit.out_prefix, "output prefix (default 'fit')");

    std::string cov_config, cov_out_dir = ".";
    int cov_threads = 0;
    auto* cov_cmd =
        app.add_subcommand("coverage", "run a coverage study from a config file");
    cov_cmd->add_option("--config", cov_config, "flat key = value config file")->required();
    cov_cmd->add_option("--out-dir", cov_out_dir, "output directory (default '.')");
    cov_cmd->add_option("--threads", cov_threads,
                        "worker threads (results are independent of this)");

    std::string sub_edges, sub_vertices, sub_out = "subnets";
    std::vector<std::string> sub_levels;
    auto* sub_cmd = app.add_subcommand(
        "subnets", "fit each subdivision and regress estimates on log N_v");
    sub_cmd->add_option("edges", sub_edges, "edge list file")->required();
    sub_cmd->add_option("vertices", sub_vertices, "vertex table with grouping columns")
        ->required();
    sub_cmd->add_option("--levels", sub_levels, "grouping columns to use (default: all)")
        ->delimiter(',');
    sub_cmd->add_option("--out", sub_out, "output prefix (default 'subnets')");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (fit_cmd->parsed()) return run_fit(fit);
        if (cov_cmd->parsed()) return run_coverage_cmd(cov_config, cov_out_dir, cov_threads);
        if (sub_cmd->parsed()) return run_subnets(sub_edges, sub_vertices, sub_levels, sub_out);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        std::cerr << "error: " << what << "\n";
        return (what.find("cannot open") != std::string::npos ||
                what.find("cannot write") != std::string::npos)
                   ? 3
                   : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
