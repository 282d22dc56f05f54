#pragma once

#include <Eigen/Dense>

#include "csearch/errors.hpp"

namespace csearch {

/// Default tolerances for the decomposition contracts.
namespace svdtol {
inline constexpr double orthonormal = 1e-8;
inline constexpr double reconstruct_rel = 1e-6;
}  // namespace svdtol

/// Rank-k factorization M ~ U diag(D) V' with orthonormal U, V columns and
/// D sorted nonincreasing.
struct TruncatedSvd {
    Eigen::MatrixXd U;
    Eigen::VectorXd D;
    Eigen::MatrixXd V;
};

/// Truncated SVD with a deterministic sign convention: in each column of U
/// the entry of largest magnitude (first such index) is made nonnegative,
/// and V's column is flipped along with it.
TruncatedSvd rank_k_svd(const Eigen::MatrixXd& M, int k);

struct LeadingTriplet {
    Eigen::VectorXd u;  // unit left singular vector of sigma1; sign not fixed
    double sigma1 = 0.0;
    double sigma2 = 0.0;  // 0 when M has a single singular value
};

/// Leading left singular vector and top two singular values of a small dense
/// matrix. Callers fix the sign of u and must treat sigma1 == sigma2 as
/// degenerate.
LeadingTriplet leading_singular_triplet(const Eigen::MatrixXd& M);

}  // namespace csearch
