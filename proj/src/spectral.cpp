#include "csearch/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace csearch {

Eigen::MatrixXd normalized_laplacian(const Graph& graph) {
    const int n = graph.num_nodes();
    Eigen::VectorXd inv_sqrt_deg(n);
    for (int v = 0; v < n; ++v) {
        const int d = graph.degree(v);
        inv_sqrt_deg[v] = d > 0 ? 1.0 / std::sqrt(static_cast<double>(d)) : 0.0;
    }
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(n, n);
    for (const auto& [u, v] : graph.edges()) {
        const double w = -inv_sqrt_deg[u] * inv_sqrt_deg[v];
        L(u, v) = w;
        L(v, u) = w;
    }
    return L;
}

Eigen::MatrixXd spectral_embed(const Graph& graph, int k) {
    const int n = graph.num_nodes();
    if (k < 1 || k > n) throw ParameterError("spectral_embed: k must satisfy 1 <= k <= n");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized_laplacian(graph));
    if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
    Eigen::MatrixXd embed = es.eigenvectors().leftCols(k);  // eigenvalues ascending
    for (int c = 0; c < k; ++c) {
        Eigen::Index pivot = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < n; ++r) {
            const double a = std::abs(embed(r, c));
            if (a > best) {
                best = a;
                pivot = r;
            }
        }
        if (embed(pivot, c) < 0.0) embed.col(c) = -embed.col(c);
    }
    return embed;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

Dendrogram slink(const Eigen::MatrixXd& points) {
    const int n = static_cast<int>(points.rows());
    Dendrogram out;
    out.n = n;
    if (n <= 1) return out;

    // Sibson's SLINK: pi[i] is the node i merges toward, lambda[i] the height
    // of that merge. Points are inserted one at a time; M holds distances
    // from the new point to the previous ones.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> lambda(n, inf), M(n);
    std::vector<int> pi(n, 0);
    pi[0] = 0;
    for (int t = 1; t < n; ++t) {
        pi[t] = t;
        lambda[t] = inf;
        for (int j = 0; j < t; ++j) M[j] = (points.row(j) - points.row(t)).norm();
        for (int j = 0; j < t; ++j) {
            if (lambda[j] >= M[j]) {
                M[pi[j]] = std::min(M[pi[j]], lambda[j]);
                lambda[j] = M[j];
                pi[j] = t;
            } else {
                M[pi[j]] = std::min(M[pi[j]], M[j]);
            }
        }
        for (int j = 0; j < t; ++j)
            if (lambda[j] >= lambda[pi[j]]) pi[j] = t;
    }

    // Pointer representation -> merge list. Each i < n-1 encodes one merge at
    // height lambda[i]; equal heights are ordered by descending i so the
    // smallest-node merge ranks highest and is removed first when cutting.
    std::vector<int> order(n - 1);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (lambda[a] != lambda[b]) return lambda[a] < lambda[b];
        return a > b;
    });

    UnionFind uf(n);
    std::vector<int> min_node(n);
    std::iota(min_node.begin(), min_node.end(), 0);
    out.merges.reserve(n - 1);
    for (int i : order) {
        const int ra = uf.find(i), rb = uf.find(pi[i]);
        const int a = min_node[ra], b = min_node[rb];
        out.merges.push_back({std::min(a, b), std::max(a, b), lambda[i]});
        uf.unite(ra, rb);
        min_node[uf.find(i)] = std::min(a, b);
    }
    return out;
}

Clustering cut_to_k(const Dendrogram& dendrogram, int k) {
    const int n = dendrogram.n;
    if (k < 1 || k > n) throw ParameterError("cut_to_k: k must satisfy 1 <= k <= n");

    UnionFind uf(n);
    for (int i = 0; i < n - k; ++i) uf.unite(dendrogram.merges[i].a, dendrogram.merges[i].b);

    // Relabel clusters by ascending smallest member.
    std::vector<int> label(n, -1);
    Clustering out;
    out.k = k;
    out.assignment.resize(n);
    int next = 0;
    for (int v = 0; v < n; ++v) {
        const int root = uf.find(v);
        if (label[root] == -1) label[root] = next++;
        out.assignment[v] = label[root];
    }
    return out;
}

Clustering spectral_cluster(const Graph& graph, int k) {
    return cut_to_k(slink(spectral_embed(graph, k)), k);
}

int select_target(const Clustering& clustering, const Eigen::VectorXd& weights) {
    if (clustering.k < 1) throw ParameterError("select_target: empty clustering");
    if (weights.size() != static_cast<Eigen::Index>(clustering.assignment.size()))
        throw DimensionError("weights length must match clustering");

    std::vector<double> sum(clustering.k, 0.0);
    std::vector<long> count(clustering.k, 0);
    for (std::size_t v = 0; v < clustering.assignment.size(); ++v) {
        sum[clustering.assignment[v]] += weights[static_cast<Eigen::Index>(v)];
        ++count[clustering.assignment[v]];
    }
    int best = 0;
    double best_mean = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < clustering.k; ++c) {
        const double mean = count[c] > 0 ? sum[c] / count[c] : -std::numeric_limits<double>::infinity();
        if (mean > best_mean) {
            best_mean = mean;
            best = c;
        }
    }
    return best;
}

}  // namespace csearch
