#include "csearch/svd.hpp"

#include <algorithm>
#include <cmath>

namespace csearch {

namespace {

// Below this size a two-sided Jacobi SVD is cheap and fully accurate.
constexpr int kJacobiCutoff = 100;
// Fast-path factor quality gate; worse than this falls back to Jacobi.
constexpr double kFactorTol = 1e-9;

// Sign convention: make the largest-magnitude entry of each U column
// nonnegative (first index on ties) and flip the matching V column.
void fix_signs(Eigen::MatrixXd& U, Eigen::MatrixXd& V) {
    for (Eigen::Index c = 0; c < U.cols(); ++c) {
        Eigen::Index pivot = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < U.rows(); ++r) {
            const double a = std::abs(U(r, c));
            if (a > best) {
                best = a;
                pivot = r;
            }
        }
        if (U(pivot, c) < 0.0) {
            U.col(c) = -U.col(c);
            V.col(c) = -V.col(c);
        }
    }
}

TruncatedSvd jacobi_svd(const Eigen::MatrixXd& M, int k) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    TruncatedSvd out;
    out.U = svd.matrixU().leftCols(k);
    out.D = svd.singularValues().head(k);
    out.V = svd.matrixV().leftCols(k);
    fix_signs(out.U, out.V);
    return out;
}

double max_ortho_error(const Eigen::MatrixXd& Q) {
    Eigen::MatrixXd g = Q.transpose() * Q;
    g.diagonal().array() -= 1.0;
    return g.cwiseAbs().maxCoeff();
}

}  // namespace

// The large-input path eigendecomposes the Gram matrix on the smaller side
// (Eigen's BDCSVD miscomputes singular vectors on some structured inputs,
// e.g. block 0/1 matrices with clustered singular values, so it is not used).
// Squaring halves the resolvable condition number; the factor-quality gate
// catches that and reroutes to Jacobi.
TruncatedSvd rank_k_svd(const Eigen::MatrixXd& M, int k) {
    if (!M.allFinite()) throw NumericError("rank_k_svd: matrix has non-finite entries");
    const auto min_dim = std::min(M.rows(), M.cols());
    if (k < 1 || k > min_dim)
        throw DimensionError("rank_k_svd: k must satisfy 1 <= k <= min(rows, cols)");

    if (min_dim <= kJacobiCutoff) return jacobi_svd(M, k);

    const bool rows_smaller = M.rows() <= M.cols();
    const Eigen::MatrixXd gram = rows_smaller ? Eigen::MatrixXd(M * M.transpose())
                                              : Eigen::MatrixXd(M.transpose() * M);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success) return jacobi_svd(M, k);

    const auto dim = gram.rows();
    TruncatedSvd out;
    out.D.resize(k);
    Eigen::MatrixXd side(dim, k);  // eigenvectors, eigenvalues descending
    for (int i = 0; i < k; ++i) {
        out.D(i) = std::sqrt(std::max(es.eigenvalues()(dim - 1 - i), 0.0));
        side.col(i) = es.eigenvectors().col(dim - 1 - i);
    }
    if (out.D(k - 1) <= 0.0 || out.D(k - 1) < 1e-8 * out.D(0)) return jacobi_svd(M, k);

    if (rows_smaller) {
        out.U = side;
        out.V = M.transpose() * (out.U * out.D.cwiseInverse().asDiagonal());
        if (max_ortho_error(out.V) > kFactorTol) return jacobi_svd(M, k);
    } else {
        out.V = side;
        out.U = M * (out.V * out.D.cwiseInverse().asDiagonal());
        if (max_ortho_error(out.U) > kFactorTol) return jacobi_svd(M, k);
    }
    fix_signs(out.U, out.V);
    return out;
}

LeadingTriplet leading_singular_triplet(const Eigen::MatrixXd& M) {
    if (!M.allFinite())
        throw NumericError("leading_singular_triplet: matrix has non-finite entries");
    if (M.rows() < 1 || M.cols() < 1)
        throw DimensionError("leading_singular_triplet: empty matrix");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU);
    LeadingTriplet out;
    out.u = svd.matrixU().col(0);
    out.sigma1 = svd.singularValues()(0);
    out.sigma2 = svd.singularValues().size() > 1 ? svd.singularValues()(1) : 0.0;
    return out;
}

}  // namespace csearch
