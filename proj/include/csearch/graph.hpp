#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "csearch/errors.hpp"

namespace csearch {

using Edge = std::pair<int, int>;

/// Undirected simple graph on nodes 0..n-1. Immutable after construction;
/// stored as sorted per-node neighbor lists (the algorithms consume column
/// slices of the adjacency matrix, never the dense matrix itself).
class Graph {
public:
    Graph() = default;

    /// Builds the graph from an edge list. Duplicate edges and both
    /// orientations are merged; self-loops or out-of-range endpoints throw.
    Graph(int n, const std::vector<Edge>& edges);

    int num_nodes() const { return n_; }
    std::size_t num_edges() const { return m_; }

    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    bool has_edge(int u, int v) const;
    double average_degree() const { return n_ == 0 ? 0.0 : 2.0 * static_cast<double>(m_) / n_; }

    /// All edges as (u,v) with u < v, sorted. Materialized on demand.
    std::vector<Edge> edges() const;

private:
    int n_ = 0;
    std::size_t m_ = 0;
    std::vector<std::vector<int>> adj_;
};

/// Stochastic block model parameters: k communities with fractions alpha,
/// within-community edge probability p, cross probability q.
struct SbmParams {
    int n = 0;
    int k = 0;
    double p = 0.0;
    double q = 0.0;
    std::vector<double> alpha;

    /// Throws ParameterError on violation. q == p is allowed (degenerates to
    /// an Erdos-Renyi graph); q > p is not.
    void validate() const;

    /// Deterministic community sizes: floor(alpha_i * n), remainder assigned
    /// to the largest community (first one on ties).
    std::vector<int> community_sizes() const;
};

/// Node -> community assignment of a generated (or loaded) graph.
struct GroundTruth {
    std::vector<int> assignment;
    int k = 0;

    void validate() const;
    int community_of(int node) const { return assignment[node]; }
    /// Sorted node ids of community i.
    std::vector<int> members(int i) const;
    std::vector<int> community_sizes() const;
};

/// mu_i from the model: coordinate j is p if node j is in community i, q
/// otherwise. Thresholding it between q and p recovers the community.
struct MembershipVector {
    Eigen::VectorXd values;
    int community = 0;
};

/// Samples an (n,k,p,q) SBM. Nodes are assigned to communities contiguously
/// by index; when shuffle_labels is set the assignment is permuted with the
/// same seeded generator before edges are drawn. Deterministic per seed.
std::pair<Graph, GroundTruth> generate_sbm(const SbmParams& params, std::uint64_t seed,
                                           bool shuffle_labels = false);

MembershipVector membership_vector(const SbmParams& params, const GroundTruth& truth,
                                   int community);

/// Result of loading an edge-list file.
struct EdgeListFile {
    Graph graph;
    long dropped_self_loops = 0;
    bool had_header = false;
};

/// Reads a whitespace-separated "u v" edge list, optionally preceded by a
/// "# n=<int>" header line. Duplicates and both orientations are tolerated;
/// self-loops are dropped and counted. Without a header the node count is
/// max id + 1.
EdgeListFile load_edge_list(const std::string& path);

/// Writes "# n=<n>" followed by one "u v" line per edge, u < v, sorted, so
/// that load(save(g)) reproduces g exactly.
void save_edge_list(const Graph& graph, const std::string& path);

struct LccResult {
    Graph graph;
    std::vector<int> old_to_new;  // -1 for dropped nodes
    std::vector<int> new_to_old;
};

/// Largest connected component; ties go to the component containing the
/// smallest node id. New ids preserve the relative order of the old ones.
LccResult largest_connected_component(const Graph& graph);

/// Label files: one "node_id community_id" line per node.
std::vector<int> load_labels(const std::string& path);
void save_labels(const std::vector<int>& assignment, const std::string& path);

}  // namespace csearch
