#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "csearch/graph.hpp"
#include "csearch/search.hpp"

namespace csearch {

/// Exact moment matrices of the model, the noiseless input on which the
/// subroutine must recover (mu_1, alpha_1) exactly. Quarter q splits into
/// contiguous community blocks of counts(q, i) coordinates; A1 and A2 carry
/// column blocks scaled so their Gram matrices equal
/// sum_i alpha_i mu_{P,i} mu_{P,i}' exactly even when alpha_i * |P3| is not
/// an integer.
struct PopulationMoments {
    Moments moments;
    Eigen::VectorXd omega;           // expected community weights
    Eigen::MatrixXi counts;          // 4 x k community counts per quarter
    std::array<int, 4> quarter_sizes{};
    bool rank_deficient = false;     // some quarter lacks a community entirely
    double p = 0.0, q = 0.0;
    Eigen::VectorXd alpha;

    /// Membership restriction mu_{P_quarter, community}: p on that
    /// community's block, q elsewhere.
    Eigen::VectorXd mu_restriction(int quarter, int community) const;
};

/// Builds A1, A2, m1, B from the model definition with a canonical
/// contiguous assignment inside each quarter.
PopulationMoments population_moments(const SbmParams& params,
                                     const std::array<int, 4>& quarter_sizes,
                                     const Eigen::VectorXd& omega);

/// Numeric evaluation of the recovery conditions. The separation conditions
/// carry unspecified asymptotic constants, so everything except the strict
/// weight-bias comparison is reported as a ratio, never as a verdict.
struct ConditionReport {
    bool a1_holds = false;   // target community mean weight strictly largest
    double sigma1 = 0.0;     // empirical mean weight of the target
    double sigma2 = 0.0;     // largest mean weight among the others
    double sigma_gap = 0.0;  // sigma1 - sigma2
    double gamma2 = 0.0;     // max |w_j - mean weight of j's community|
    double a2_ratio = 0.0;   // gamma2 / sigma_gap (NaN when the gap vanishes)
    double a2_bound = 0.0;   // concentration bound with xi(n) = sqrt(log log n)
    double a3_lhs = 0.0;     // (p-q)^2 / (p sqrt(p))
    double a3_rhs = 0.0;     // alpha_max / (alpha_min^2 sqrt(n))
    Eigen::VectorXd omega_hat;  // empirical per-community mean weights
};

ConditionReport evaluate_conditions(const SbmParams& params, const GroundTruth& truth,
                                    const Eigen::VectorXd& weights, int target = 0);

/// Compact JSON rendering of the report (keys mirror the field names).
std::string to_json(const ConditionReport& report);

}  // namespace csearch
