#include "csearch/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace csearch {

void LabeledSet::validate(int n) const {
    if (nodes.empty()) throw ParameterError("labeled set must be nonempty");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] < 0 || nodes[i] >= n) throw IndexError("labeled node id out of range");
        if (i > 0 && nodes[i] == nodes[i - 1])
            throw ParameterError("duplicate labeled node " + std::to_string(nodes[i]));
        if (i > 0 && nodes[i] < nodes[i - 1]) throw ParameterError("labeled set must be sorted");
    }
}

Eigen::VectorXd synthetic_weights(const GroundTruth& truth, int target, double w_lo, double w_hi,
                                  double rho, std::uint64_t seed) {
    if (target < 0 || target >= truth.k) throw IndexError("target community out of range");
    if (!(rho > 0.0 && rho < 1.0)) throw ParameterError("rho must be in (0,1)");
    if (!(w_lo < w_hi)) throw ParameterError("w_lo must be less than w_hi");
    if (w_lo < 0.0) throw ParameterError("weights must be nonnegative");

    const int n = static_cast<int>(truth.assignment.size());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd w(n);
    for (int j = 0; j < n; ++j) {
        const double u = unif(rng);
        if (truth.assignment[j] == target)
            w[j] = u < rho ? w_hi : w_lo;
        else
            w[j] = u < 1.0 - rho ? w_hi : w_lo;
    }
    return w;
}

namespace {

// Shell of nodes at BFS distance exactly r from root, optionally confined to
// root's quarter. dist/touched are scratch reused across roots.
void bfs_shell(const Graph& g, int root, int r, const PartitionScheme* part,
               std::vector<int>& dist, std::vector<int>& touched, std::vector<int>& shell) {
    shell.clear();
    touched.clear();
    const int home = part ? part->quarter_of[root] : -1;
    std::vector<int> frontier{root};
    dist[root] = 0;
    touched.push_back(root);
    for (int depth = 0; depth < r && !frontier.empty(); ++depth) {
        std::vector<int> next;
        for (int u : frontier) {
            for (int v : g.neighbors(u)) {
                if (dist[v] != -1) continue;
                if (part && part->quarter_of[v] != home) continue;
                dist[v] = depth + 1;
                touched.push_back(v);
                next.push_back(v);
            }
        }
        frontier = std::move(next);
    }
    for (int v : touched)
        if (dist[v] == r) shell.push_back(v);
}

}  // namespace

LabeledWeights labeled_weights(const Graph& graph, const LabeledSet& labeled, int r,
                               WeightScope scope, const PartitionScheme* partition,
                               int label_quarter) {
    const int n = graph.num_nodes();
    labeled.validate(n);
    if (r < 1) throw ParameterError("radius must be at least 1");
    if (scope == WeightScope::SplitConforming) {
        if (partition == nullptr || label_quarter < 0 || label_quarter > 3)
            throw ParameterError("SplitConforming scope needs a partition and label quarter");
    }

    std::vector<char> in_labels(n, 0);
    for (int l : labeled.nodes) {
        if (scope == WeightScope::SplitConforming && partition->quarter_of[l] != label_quarter)
            continue;
        in_labels[l] = 1;
    }

    const PartitionScheme* shell_part =
        scope == WeightScope::SplitConforming ? partition : nullptr;

    LabeledWeights out;
    out.w = Eigen::VectorXd::Zero(n);
    std::vector<int> dist(n, -1), touched, shell;
    std::vector<char> in_shell(n, 0);
    for (int i = 0; i < n; ++i) {
        bfs_shell(graph, i, r, shell_part, dist, touched, shell);
        for (int v : shell) in_shell[v] = 1;
        long count = 0;
        for (int u : shell) {
            for (int v : graph.neighbors(u)) {
                if (!in_labels[v]) continue;
                // Count each qualifying edge once even when both endpoints
                // are simultaneously in the shell and in the labeled set.
                if (in_shell[v] && in_labels[u] && v < u) continue;
                ++count;
            }
        }
        out.w[i] = static_cast<double>(count);
        for (int v : shell) in_shell[v] = 0;
        for (int v : touched) dist[v] = -1;
    }
    out.degenerate = out.w.maxCoeff() <= 0.0;
    return out;
}

int recommended_radius(int n, double avg_degree, int L_size) {
    if (!(avg_degree > 1.0)) throw ParameterError("average degree must exceed 1");
    if (L_size < 1) throw ParameterError("labeled set size must be positive");
    if (n < 2) throw ParameterError("n must be at least 2");
    const double n_eps = n * std::log(static_cast<double>(n)) / avg_degree;
    const double raw = 2.0 * std::log(n_eps / L_size) / std::log(avg_degree);
    const int r = static_cast<int>(std::lround(raw));
    return std::clamp(r, 1, 10);
}

Eigen::VectorXd load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::pair<long, double>> entries;
    long line_no = 0, max_id = -1;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        long id;
        double value;
        if (!(ss >> id)) continue;
        std::string trailing;
        if (!(ss >> value) || (ss >> trailing))
            throw ParseError("expected 'node_id weight'", line_no);
        if (id < 0) throw ParseError("negative node id", line_no);
        if (!std::isfinite(value) || value < 0.0)
            throw ParseError("weight must be finite and nonnegative", line_no);
        entries.emplace_back(id, value);
        max_id = std::max(max_id, id);
    }
    Eigen::VectorXd w = Eigen::VectorXd::Constant(max_id + 1, -1.0);
    for (const auto& [id, value] : entries) w[id] = value;
    if ((w.array() < 0.0).any()) throw ParameterError("missing weight for some node");
    return w;
}

void save_weights(const Eigen::VectorXd& w, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << std::fixed << std::setprecision(6);
    for (Eigen::Index i = 0; i < w.size(); ++i) out << i << " " << w[i] << "\n";
    if (!out) throw IoError("write failed: " + path);
}

std::vector<int> load_labeled_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<int> nodes;
    long line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        long id;
        if (!(ss >> id)) continue;
        std::string trailing;
        if (ss >> trailing) throw ParseError("expected a single node id", line_no);
        if (id < 0) throw ParseError("negative node id", line_no);
        nodes.push_back(static_cast<int>(id));
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return nodes;
}

}  // namespace csearch
