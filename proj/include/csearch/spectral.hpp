#pragma once

#include <vector>

#include <Eigen/Dense>

#include "csearch/graph.hpp"

namespace csearch {

/// Full clustering into k nonempty clusters, ids relabeled by ascending
/// smallest member node.
struct Clustering {
    std::vector<int> assignment;
    int k = 0;
};

/// Single-linkage merge tree: exactly n-1 merges in nondecreasing height
/// order. a and b are the smallest node ids of the two merging clusters,
/// a < b.
struct Dendrogram {
    struct Merge {
        int a, b;
        double height;
    };
    std::vector<Merge> merges;
    int n = 0;
};

/// L = I - D^{-1/2} A D^{-1/2}; an isolated node contributes an identity
/// row/column. Eigenvalues lie in [0,2].
Eigen::MatrixXd normalized_laplacian(const Graph& graph);

/// Rows of the bottom-k eigenvectors of the normalized Laplacian, columns
/// orthonormal, eigenvalues ascending, deterministic column signs.
Eigen::MatrixXd spectral_embed(const Graph& graph, int k);

/// Exact single-linkage dendrogram over the rows (Euclidean metric) via the
/// SLINK pointer representation: O(n^2) time, O(n) working memory. Ties in
/// merge height order so that the smaller-node merge is cut first.
Dendrogram slink(const Eigen::MatrixXd& points);

/// Removes the k-1 highest merges.
Clustering cut_to_k(const Dendrogram& dendrogram, int k);

/// The baseline pipeline: embed, slink, cut.
Clustering spectral_cluster(const Graph& graph, int k);

/// Cluster with the highest average node weight; ties go to the smaller id.
int select_target(const Clustering& clustering, const Eigen::VectorXd& weights);

}  // namespace csearch
