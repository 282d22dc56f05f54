// Command-line harness around the community-search library: SBM generation,
// weight construction, the search itself, the spectral baseline, and the
// config-driven benchmark runner.

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csearch/bench.hpp"
#include "csearch/diagnostics.hpp"
#include "csearch/graph.hpp"
#include "csearch/search.hpp"
#include "csearch/spectral.hpp"
#include "csearch/weights.hpp"

namespace {

using namespace csearch;

std::ostream& out6() {
    std::cout << std::fixed << std::setprecision(6);
    return std::cout;
}

void save_community(const std::vector<int>& nodes, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    for (int v : nodes) out << v << "\n";
}

int cmd_generate(int n, int k, double p, double q, const std::vector<double>& alpha,
                 double alpha_min, std::uint64_t seed, bool shuffle,
                 const std::string& out_edges, const std::string& out_labels) {
    SbmParams params{n, k, p, q, {}};
    if (!alpha.empty())
        params.alpha = alpha;
    else if (alpha_min > 0.0)
        params.alpha = ramp_alpha(k, alpha_min);
    else
        params.alpha.assign(k, 1.0 / k);

    const auto [graph, truth] = generate_sbm(params, seed, shuffle);
    save_edge_list(graph, out_edges);
    if (!out_labels.empty()) save_labels(truth.assignment, out_labels);
    std::cout << "nodes " << graph.num_nodes() << "\nedges " << graph.num_edges() << "\n";
    return 0;
}

int cmd_weights(const std::string& mode, const std::string& graph_path,
                const std::string& labels_path, const std::string& labeled_set_path, int target,
                double w_lo, double w_hi, double rho, int r, bool auto_r, std::uint64_t seed,
                const std::string& out_path) {
    if (mode == "synthetic") {
        const std::vector<int> assignment = load_labels(labels_path);
        GroundTruth truth{assignment, *std::max_element(assignment.begin(), assignment.end()) + 1};
        truth.validate();
        save_weights(synthetic_weights(truth, target, w_lo, w_hi, rho, seed), out_path);
        return 0;
    }
    if (mode == "labeled") {
        const Graph graph = load_edge_list(graph_path).graph;
        LabeledSet set{load_labeled_set(labeled_set_path), target};
        if (auto_r)
            r = recommended_radius(graph.num_nodes(), graph.average_degree(),
                                   static_cast<int>(set.nodes.size()));
        const LabeledWeights lw = labeled_weights(graph, set, r);
        if (lw.degenerate)
            std::cerr << "warning: all weights are zero (radius beyond every shell)\n";
        save_weights(lw.w, out_path);
        std::cout << "radius " << r << "\n";
        return 0;
    }
    std::cerr << "unknown weights mode: " << mode << "\n";
    return 1;
}

int cmd_search(const std::string& graph_path, const std::string& weights_path, int k,
               std::uint64_t seed, std::optional<double> tau_flag, std::optional<double> p_flag,
               std::optional<double> q_flag, bool auto_tau, bool refine,
               const std::string& out_path) {
    const Graph graph = load_edge_list(graph_path).graph;
    const Eigen::VectorXd weights = load_weights(weights_path);

    std::optional<double> tau;
    if (tau_flag) tau = *tau_flag;
    else if (auto_tau) tau = std::nullopt;
    else if (p_flag && q_flag) tau = (*p_flag + *q_flag) / 2.0;

    const SearchEngine engine(graph, k, seed);
    CommunityEstimate est = engine.run(weights, tau);

    if (refine) {
        double p, q;
        if (p_flag && q_flag) {
            p = *p_flag;
            q = *q_flag;
        } else {
            std::tie(p, q) = estimate_densities(graph, est.nodes);
        }
        est = exact_recovery_refine(graph, est, engine.partition(), p, q).estimate;
    }

    save_community(est.nodes, out_path);
    out6() << "alpha_hat " << est.alpha_hat << "\n";
    for (int r = 0; r < 4; ++r)
        out6() << "rotation " << r << " sigma1 " << est.rotations[r].sigma1 << " sigma2 "
               << est.rotations[r].sigma2 << " tau " << est.rotations[r].tau << "\n";
    if (est.degenerate())
        std::cerr << "warning: singular value gap is negligible on every rotation; "
                     "the side information looks uninformative\n";
    std::cout << "community_size " << est.nodes.size() << "\n";
    return 0;
}

int cmd_cluster(const std::string& graph_path, int k, const std::string& weights_path,
                const std::string& out_path) {
    const Graph graph = load_edge_list(graph_path).graph;
    const Clustering clustering = spectral_cluster(graph, k);
    save_labels(clustering.assignment, out_path);
    if (!weights_path.empty()) {
        const Eigen::VectorXd weights = load_weights(weights_path);
        std::cout << "target_cluster " << select_target(clustering, weights) << "\n";
    }
    return 0;
}

int cmd_bench(const std::string& config_path, std::uint64_t seed, const std::string& out_path) {
    ExperimentConfig cfg = ExperimentConfig::from_json_file(config_path);
    cfg.seed = seed;
    const std::vector<ResultRow> rows = run_experiment(cfg);
    write_csv(rows, out_path);
    std::cout << "rows " << rows.size() << "\n";
    return 0;
}

int cmd_polblogs(const std::string& edges, const std::string& labels, std::vector<int> ms, int r,
                 int draws, std::uint64_t seed, const std::string& out_path) {
    ExperimentConfig cfg;
    cfg.experiment_id = "polblogs";
    cfg.mode = BenchMode::Polblogs;
    cfg.dataset_edges = edges;
    cfg.dataset_labels = labels;
    cfg.labeled_r = r;
    cfg.trials = draws;
    cfg.seed = seed;
    cfg.tau_policy = TauPolicy::Auto;
    cfg.sweep_name = "m";
    if (ms.empty()) ms = {10};
    for (int m : ms) cfg.sweep_values.push_back(static_cast<double>(m));

    const PolblogsData data = load_polblogs(edges, labels);
    std::cout << "nodes " << data.graph.num_nodes() << "\nedges " << data.graph.num_edges()
              << "\ncommunities " << data.community_sizes[0] << " " << data.community_sizes[1]
              << "\n";
    if (data.size_warning)
        std::cerr << "warning: dataset counts differ from the published 1222/16716/{586,636}\n";

    const std::vector<ResultRow> rows = run_experiment(cfg);
    if (!out_path.empty()) write_csv(rows, out_path);

    // Table-style summary over the draws (community 0 rows carry the error).
    for (double mv : cfg.sweep_values) {
        double sum = 0.0;
        long long best = -1;
        int count = 0;
        for (const auto& row : rows) {
            if (row.sweep_value != mv || row.target != 0 || row.algorithm != "search") continue;
            sum += static_cast<double>(row.error);
            best = best < 0 ? row.error : std::min(best, row.error);
            ++count;
        }
        if (count == 0) continue;
        out6() << "m " << static_cast<int>(mv) << " mean_error " << sum / count << " best_error "
               << static_cast<double>(best) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-community search in stochastic block model graphs"};
    app.require_subcommand(1);

    // generate
    int n = 1000, k = 5;
    double p = 0.25, q = 0.05, alpha_min = 0.0;
    std::vector<double> alpha;
    std::uint64_t seed = 0;
    bool shuffle = false;
    std::string out_edges, out_labels;
    auto* gen = app.add_subcommand("generate", "Sample an SBM graph and its labels");
    gen->add_option("--n", n, "node count")->required();
    gen->add_option("--k", k, "community count")->required();
    gen->add_option("--p", p, "within-community edge probability")->required();
    gen->add_option("--q", q, "cross-community edge probability")->required();
    gen->add_option("--alpha", alpha, "community fractions (must sum to 1)");
    gen->add_option("--alpha-min", alpha_min, "smallest fraction of a linear ramp");
    gen->add_option("--seed", seed, "RNG seed")->required();
    gen->add_flag("--shuffle", shuffle, "permute community labels over nodes");
    gen->add_option("--out-edges", out_edges, "edge list output path")->required();
    gen->add_option("--out-labels", out_labels, "label file output path");

    // weights
    std::string wmode = "synthetic", graph_path, labels_path, labeled_set_path, out_path;
    int target = 0, radius = 2;
    double w_lo = 5.0, w_hi = 10.0, rho = 0.8;
    bool auto_r = false;
    auto* wts = app.add_subcommand("weights", "Build biased node weights");
    wts->add_option("--mode", wmode, "synthetic | labeled")->required();
    wts->add_option("--graph", graph_path, "edge list (labeled mode)");
    wts->add_option("--labels", labels_path, "label file (synthetic mode)");
    wts->add_option("--labeled-set", labeled_set_path, "file with one labeled node id per line");
    wts->add_option("--target", target, "target community id");
    wts->add_option("--w-lo", w_lo, "low weight value");
    wts->add_option("--w-hi", w_hi, "high weight value");
    wts->add_option("--rho", rho, "probability of the high weight on the target");
    wts->add_option("--r", radius, "BFS shell radius");
    wts->add_flag("--auto-r", auto_r, "choose the radius from the average degree");
    wts->add_option("--seed", seed, "RNG seed (synthetic mode)");
    wts->add_option("--out", out_path, "weights file output path")->required();

    // search
    std::string weights_path;
    double tau_value = 0.0, p_value = 0.0, q_value = 0.0;
    bool auto_tau = false, refine = false;
    auto* sea = app.add_subcommand("search", "Recover the target community");
    sea->add_option("--graph", graph_path, "edge list path")->required();
    sea->add_option("--weights", weights_path, "weights file path")->required();
    sea->add_option("--k", k, "number of communities")->required();
    sea->add_option("--seed", seed, "partition seed")->required();
    auto* tau_opt = sea->add_option("--tau", tau_value, "membership threshold");
    auto* p_opt = sea->add_option("--p", p_value, "within probability (sets tau=(p+q)/2)");
    auto* q_opt = sea->add_option("--q", q_value, "cross probability");
    sea->add_flag("--auto-tau", auto_tau, "2-means threshold per rotation");
    sea->add_flag("--refine", refine, "degree-thresholding refinement pass");
    sea->add_option("--out", out_path, "community file output path")->required();

    // cluster
    auto* clu = app.add_subcommand("cluster", "Spectral+SLINK baseline clustering");
    clu->add_option("--graph", graph_path, "edge list path")->required();
    clu->add_option("--k", k, "number of clusters")->required();
    clu->add_option("--weights", weights_path, "weights file; prints the selected target");
    clu->add_option("--out", out_path, "cluster assignment output path")->required();

    // bench
    std::string config_path;
    auto* ben = app.add_subcommand("bench", "Run a JSON-configured experiment to CSV");
    ben->add_option("--config", config_path, "experiment config JSON")->required();
    ben->add_option("--seed", seed, "master seed")->required();
    ben->add_option("--out", out_path, "CSV output path")->required();

    // polblogs
    std::string edges_path;
    std::vector<int> ms;
    int draws = 50;
    auto* pol = app.add_subcommand("polblogs", "Political-blogs benchmark summary");
    pol->add_option("--edges", edges_path, "edge list path")->required();
    pol->add_option("--labels", labels_path, "label file path")->required();
    pol->add_option("--m", ms, "labeled nodes per community (repeatable)");
    pol->add_option("--r", radius, "BFS shell radius")->default_val(1);
    pol->add_option("--draws", draws, "random label draws per m");
    pol->add_option("--seed", seed, "master seed")->required();
    pol->add_option("--out", out_path, "optional CSV output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_generate(n, k, p, q, alpha, alpha_min, seed, shuffle, out_edges,
                                out_labels);
        if (wts->parsed())
            return cmd_weights(wmode, graph_path, labels_path, labeled_set_path, target, w_lo,
                               w_hi, rho, radius, auto_r, seed, out_path);
        if (sea->parsed()) {
            std::optional<double> tau_flag, p_flag, q_flag;
            if (tau_opt->count() > 0) tau_flag = tau_value;
            if (p_opt->count() > 0) p_flag = p_value;
            if (q_opt->count() > 0) q_flag = q_value;
            return cmd_search(graph_path, weights_path, k, seed, tau_flag, p_flag, q_flag,
                              auto_tau, refine, out_path);
        }
        if (clu->parsed()) return cmd_cluster(graph_path, k, weights_path, out_path);
        if (ben->parsed()) return cmd_bench(config_path, seed, out_path);
        if (pol->parsed())
            return cmd_polblogs(edges_path, labels_path, ms, radius, draws, seed, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
