#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csearch/graph.hpp"
#include "csearch/partition.hpp"
#include "csearch/svd.hpp"

namespace csearch {

/// Quarter roles for one pass: roles[0] is the quarter whose membership
/// vector is being estimated (P1), roles[2] the shared column quarter (P3),
/// roles[3] the weighted-sum quarter (P4).
using RoleMap = std::array<int, 4>;

/// Cyclic role schedule: rotation r assigns role j to quarter (r + j) mod 4,
/// so every quarter plays the estimation role exactly once.
inline RoleMap rotation_roles(int rotation) {
    return {rotation % 4, (rotation + 1) % 4, (rotation + 2) % 4, (rotation + 3) % 4};
}

/// Empirical (or population) moment matrices consumed by the subroutine:
///   A1 = X[P1,P3] / sqrt(|P3|),  A2 = X[P2,P3] / sqrt(|P3|),
///   m1 = mean over j in P1 of X[P1,j],
///   B  = (1/|P4|) sum over j in P4 of w_j X[P1,j] X[P2,j]'.
struct Moments {
    Eigen::MatrixXd A1;
    Eigen::MatrixXd A2;
    Eigen::VectorXd m1;
    Eigen::MatrixXd B;
};

Moments build_moments(const Graph& graph, const PartitionScheme& partition,
                      const Eigen::VectorXd& weights, const RoleMap& roles);

struct SubroutineResult {
    Eigen::VectorXd mu_hat;  // membership estimate over the P1-role quarter
    double alpha_hat = 0.0;  // estimated target community fraction
    double sigma1 = 0.0;     // top singular values of R = W1' B W2
    double sigma2 = 0.0;
    double a = 0.0;  // sign-fixed projection; thresholds on z use tau_z = a * tau_mu
};

/// Whitening subroutine: rank-k SVDs of A1, A2 give whiteners Wi = Ui Di^-1;
/// u1 is the leading left singular vector of W1' B W2 with its sign fixed so
/// a = u1' W1' m1 > 0; returns mu_hat = (U1 D1 u1) / a and alpha_hat = a^2.
SubroutineResult search_subroutine(const Moments& moments, int k);

/// Indices with value strictly above tau.
std::vector<int> threshold_membership(const Eigen::VectorXd& mu_hat, double tau);

/// Exact 1-d 2-means on the coordinates; returns the midpoint of the two
/// centroids. Ties between splits resolve toward the larger upper cluster.
double auto_threshold(const Eigen::VectorXd& mu_hat);

struct RotationDiag {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double alpha_hat = 0.0;
    double tau = 0.0;  // threshold actually applied to mu_hat
};

struct CommunityEstimate {
    std::vector<int> nodes;  // sorted recovered node set
    Eigen::VectorXd mu_hat;  // full-length membership estimate
    double alpha_hat = 0.0;  // mean of the four per-rotation estimates
    std::array<RotationDiag, 4> rotations;

    /// Side information was uninformative on every rotation: the singular
    /// value gap of R never exceeded rel_gap * sigma1. Heuristic flag; with
    /// constant weights the observed relative gaps stay well under 0.1.
    bool degenerate(double rel_gap = 0.1) const;
};

/// Shared state for searching several targets on one graph: the partition
/// and, per rotation, the whiteners and projected mean, which do not depend
/// on the weights. Only B varies per target.
class SearchEngine {
public:
    SearchEngine(const Graph& graph, int k, std::uint64_t seed);

    const PartitionScheme& partition() const { return partition_; }
    int k() const { return k_; }

    /// Full pipeline for one weight vector: per rotation, build B, whiten,
    /// extract and threshold the membership estimate; union the quarters.
    CommunityEstimate run(const Eigen::VectorXd& weights, std::optional<double> tau) const;

private:
    struct Rotation {
        RoleMap roles;
        Eigen::MatrixXd W1, W2;  // whiteners U_i D_i^-1
        Eigen::MatrixXd U1D1;    // maps whitened coordinates back: z = U1 D1 u
        Eigen::VectorXd W1t_m1;
    };

    const Graph* graph_;
    int k_;
    PartitionScheme partition_;
    std::array<Rotation, 4> rotations_;
};

/// Algorithm entry point. Runs four role rotations so every quarter is
/// estimated once; tau empty selects auto_threshold per rotation.
CommunityEstimate community_search(const Graph& graph, int k, const Eigen::VectorXd& weights,
                                   std::optional<double> tau, std::uint64_t seed);

struct RefineResult {
    CommunityEstimate estimate;
    std::array<bool, 4> skipped{};  // source quarter estimate was empty
};

/// Degree-thresholding refinement: each quarter is re-decided by counting
/// edges into the estimated set of the preceding quarter in the rotation
/// schedule and thresholding at |V_hat_source| (p+q)/2.
RefineResult exact_recovery_refine(const Graph& graph, const CommunityEstimate& estimate,
                                   const PartitionScheme& partition, double p, double q);

/// Within-set and set-to-complement edge densities of a node set; the
/// practical (p_hat, q_hat) estimate used when model parameters are unknown.
std::pair<double, double> estimate_densities(const Graph& graph, const std::vector<int>& nodes);

struct TargetOutcome {
    std::optional<CommunityEstimate> estimate;
    std::string error;  // nonempty when the target's search failed
};

/// Multi-target search sharing one partition and one set of whiteners per
/// rotation across all targets. Per-target results are identical to a
/// community_search call with the same seed; failures are reported per
/// target without aborting the others.
std::vector<TargetOutcome> parallel_search(const Graph& graph, int k,
                                           const std::vector<Eigen::VectorXd>& weight_vectors,
                                           const std::vector<std::optional<double>>& taus,
                                           std::uint64_t seed);

}  // namespace csearch
