#include "csearch/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

namespace csearch {

Graph::Graph(int n, const std::vector<Edge>& edges) : n_(n) {
    if (n < 0) throw ParameterError("node count must be nonnegative");
    adj_.resize(n);
    std::vector<Edge> norm;
    norm.reserve(edges.size());
    for (const auto& [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw IndexError("edge endpoint out of range: (" + std::to_string(u) + "," +
                             std::to_string(v) + ")");
        if (u == v) throw ParameterError("self-loop not allowed: node " + std::to_string(u));
        norm.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(norm.begin(), norm.end());
    norm.erase(std::unique(norm.begin(), norm.end()), norm.end());
    m_ = norm.size();
    for (const auto& [u, v] : norm) {
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

bool Graph::has_edge(int u, int v) const {
    const auto& nb = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
    const int target = adj_[u].size() <= adj_[v].size() ? v : u;
    return std::binary_search(nb.begin(), nb.end(), target);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(m_);
    for (int u = 0; u < n_; ++u)
        for (int v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

void SbmParams::validate() const {
    if (n < 1) throw ParameterError("n must be positive");
    if (k < 1 || k > n) throw ParameterError("k must satisfy 1 <= k <= n");
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("p must be in (0,1]");
    if (!(q >= 0.0 && q < 1.0)) throw ParameterError("q must be in [0,1)");
    if (q > p) throw ParameterError("q must not exceed p");
    if (static_cast<int>(alpha.size()) != k) throw ParameterError("alpha must have length k");
    double sum = 0.0;
    for (double a : alpha) {
        if (!(a > 0.0)) throw ParameterError("alpha entries must be positive");
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ParameterError("alpha must sum to 1");
    for (double a : alpha)
        if (static_cast<int>(std::floor(a * n)) < 1)
            throw ParameterError("every community must round to at least one node");
}

std::vector<int> SbmParams::community_sizes() const {
    std::vector<int> sizes(k);
    int assigned = 0;
    for (int i = 0; i < k; ++i) {
        sizes[i] = static_cast<int>(std::floor(alpha[i] * n));
        assigned += sizes[i];
    }
    int largest = static_cast<int>(std::max_element(alpha.begin(), alpha.end()) - alpha.begin());
    sizes[largest] += n - assigned;
    return sizes;
}

void GroundTruth::validate() const {
    std::vector<bool> seen(k, false);
    for (int c : assignment) {
        if (c < 0 || c >= k) throw IndexError("community index out of range");
        seen[c] = true;
    }
    for (int i = 0; i < k; ++i)
        if (!seen[i]) throw ParameterError("community " + std::to_string(i) + " is empty");
}

std::vector<int> GroundTruth::members(int i) const {
    if (i < 0 || i >= k) throw IndexError("community index out of range");
    std::vector<int> out;
    for (int j = 0; j < static_cast<int>(assignment.size()); ++j)
        if (assignment[j] == i) out.push_back(j);
    return out;
}

std::vector<int> GroundTruth::community_sizes() const {
    std::vector<int> sizes(k, 0);
    for (int c : assignment) ++sizes[c];
    return sizes;
}

std::pair<Graph, GroundTruth> generate_sbm(const SbmParams& params, std::uint64_t seed,
                                           bool shuffle_labels) {
    params.validate();
    const auto sizes = params.community_sizes();

    GroundTruth truth;
    truth.k = params.k;
    truth.assignment.reserve(params.n);
    for (int i = 0; i < params.k; ++i)
        truth.assignment.insert(truth.assignment.end(), sizes[i], i);

    std::mt19937_64 rng(seed);
    if (shuffle_labels) std::shuffle(truth.assignment.begin(), truth.assignment.end(), rng);

    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Edge> edges;
    for (int u = 0; u < params.n; ++u) {
        for (int v = u + 1; v < params.n; ++v) {
            const double prob =
                truth.assignment[u] == truth.assignment[v] ? params.p : params.q;
            if (unif(rng) < prob) edges.emplace_back(u, v);
        }
    }
    return {Graph(params.n, edges), std::move(truth)};
}

MembershipVector membership_vector(const SbmParams& params, const GroundTruth& truth,
                                   int community) {
    if (community < 0 || community >= params.k) throw IndexError("community index out of range");
    MembershipVector mu;
    mu.community = community;
    mu.values.resize(params.n);
    for (int j = 0; j < params.n; ++j)
        mu.values[j] = truth.assignment[j] == community ? params.p : params.q;
    return mu;
}

EdgeListFile load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    EdgeListFile result;
    long line_no = 0;
    long declared_n = -1;
    std::vector<Edge> edges;
    int max_id = -1;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        // Optional "# n=<int>" header on the first line.
        if (line_no == 1 && line.rfind("# n=", 0) == 0) {
            try {
                declared_n = std::stol(line.substr(4));
            } catch (const std::exception&) {
                throw ParseError("malformed header", line_no);
            }
            if (declared_n < 0) throw ParseError("negative node count in header", line_no);
            result.had_header = true;
            continue;
        }
        std::istringstream ss(line);
        long u, v;
        if (!(ss >> u)) {
            std::string tok;
            std::istringstream probe(line);
            if (!(probe >> tok)) continue;  // blank line
            throw ParseError("expected two node ids", line_no);
        }
        std::string trailing;
        if (!(ss >> v) || (ss >> trailing)) throw ParseError("expected two node ids", line_no);
        if (u < 0 || v < 0) throw ParseError("negative node id", line_no);
        if (declared_n >= 0 && (u >= declared_n || v >= declared_n))
            throw ParseError("node id exceeds declared node count", line_no);
        if (u == v) {
            ++result.dropped_self_loops;
            continue;
        }
        max_id = std::max(max_id, static_cast<int>(std::max(u, v)));
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    const int n = declared_n >= 0 ? static_cast<int>(declared_n) : max_id + 1;
    result.graph = Graph(n, edges);
    return result;
}

void save_edge_list(const Graph& graph, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << "# n=" << graph.num_nodes() << "\n";
    for (const auto& [u, v] : graph.edges()) out << u << " " << v << "\n";
    if (!out) throw IoError("write failed: " + path);
}

LccResult largest_connected_component(const Graph& graph) {
    const int n = graph.num_nodes();
    std::vector<int> comp(n, -1);
    std::vector<int> comp_size;
    for (int s = 0; s < n; ++s) {
        if (comp[s] != -1) continue;
        const int id = static_cast<int>(comp_size.size());
        int size = 0;
        std::queue<int> bfs;
        bfs.push(s);
        comp[s] = id;
        while (!bfs.empty()) {
            int u = bfs.front();
            bfs.pop();
            ++size;
            for (int v : graph.neighbors(u)) {
                if (comp[v] == -1) {
                    comp[v] = id;
                    bfs.push(v);
                }
            }
        }
        comp_size.push_back(size);
    }

    LccResult res;
    res.old_to_new.assign(n, -1);
    if (n == 0) return res;

    const int best = static_cast<int>(
        std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin());
    for (int v = 0; v < n; ++v) {
        if (comp[v] == best) {
            res.old_to_new[v] = static_cast<int>(res.new_to_old.size());
            res.new_to_old.push_back(v);
        }
    }
    std::vector<Edge> edges;
    for (const auto& [u, v] : graph.edges())
        if (comp[u] == best && comp[v] == best)
            edges.emplace_back(res.old_to_new[u], res.old_to_new[v]);
    res.graph = Graph(static_cast<int>(res.new_to_old.size()), edges);
    return res;
}

std::vector<int> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::pair<long, long>> entries;
    long line_no = 0;
    long max_id = -1;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ss(line);
        long id, label;
        if (!(ss >> id)) continue;  // blank line
        std::string trailing;
        if (!(ss >> label) || (ss >> trailing))
            throw ParseError("expected 'node_id community_id'", line_no);
        if (id < 0 || label < 0) throw ParseError("negative id", line_no);
        entries.emplace_back(id, label);
        max_id = std::max(max_id, id);
    }
    std::vector<int> assignment(max_id + 1, -1);
    for (const auto& [id, label] : entries) assignment[id] = static_cast<int>(label);
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] < 0)
            throw ParameterError("no label for node " + std::to_string(i));
    return assignment;
}

void save_labels(const std::vector<int>& assignment, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < assignment.size(); ++i)
        out << i << " " << assignment[i] << "\n";
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace csearch
