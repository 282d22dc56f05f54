#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csearch/graph.hpp"
#include "csearch/partition.hpp"

namespace csearch {

/// Known member nodes of the target community.
struct LabeledSet {
    std::vector<int> nodes;  // sorted, unique
    int target = 0;

    void validate(int n) const;
};

/// Graph used for the BFS shells of labeled_weights. WholeGraph is the
/// practical variant; SplitConforming grows each tree inside the quarter of
/// its root and counts only labels placed in a designated other quarter,
/// mirroring the independence structure of the labeled-node analysis.
enum class WeightScope { WholeGraph, SplitConforming };

struct LabeledWeights {
    Eigen::VectorXd w;
    bool degenerate = false;  // all-zero weights (radius beyond every shell)
};

/// Biased weights from the synthetic protocol: a node in the target community
/// draws w_hi with probability rho (w_lo otherwise); any other node draws
/// w_hi with probability 1-rho. Deterministic per seed.
Eigen::VectorXd synthetic_weights(const GroundTruth& truth, int target, double w_lo, double w_hi,
                                  double rho, std::uint64_t seed);

/// Tree-method weights: w_i counts the edges with one endpoint in the BFS
/// shell at distance exactly r from node i and the other endpoint in the
/// labeled set (each edge counted once). Labeled nodes get weights by the
/// same rule. For SplitConforming pass the partition and the quarter holding
/// the labeled nodes.
LabeledWeights labeled_weights(const Graph& graph, const LabeledSet& labeled, int r,
                               WeightScope scope = WeightScope::WholeGraph,
                               const PartitionScheme* partition = nullptr,
                               int label_quarter = -1);

/// Radius rule r = round(2 log(n^eps / L) / log(np)) with np estimated by the
/// observed average degree and n^eps by n log(n) / avg_degree, clamped to
/// [1, 10].
int recommended_radius(int n, double avg_degree, int L_size);

/// Weights file: one "node_id weight" line per node.
Eigen::VectorXd load_weights(const std::string& path);
void save_weights(const Eigen::VectorXd& w, const std::string& path);

/// Labeled-set file: one node id per line.
std::vector<int> load_labeled_set(const std::string& path);

}  // namespace csearch
