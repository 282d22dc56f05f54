#include "csearch/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

namespace csearch {

namespace {

// Largest-remainder apportionment of size into k parts proportional to
// alpha. Ties go to the larger remainder, then the smaller index.
std::vector<int> apportion(const Eigen::VectorXd& alpha, int size) {
    const int k = static_cast<int>(alpha.size());
    std::vector<int> counts(k);
    std::vector<std::pair<double, int>> remainders(k);
    int assigned = 0;
    for (int i = 0; i < k; ++i) {
        const double exact = alpha[i] * size;
        counts[i] = static_cast<int>(std::floor(exact));
        remainders[i] = {exact - counts[i], i};
        assigned += counts[i];
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (int j = 0; j < size - assigned; ++j) ++counts[remainders[j].second];
    return counts;
}

}  // namespace

Eigen::VectorXd PopulationMoments::mu_restriction(int quarter, int community) const {
    const int size = quarter_sizes[quarter];
    Eigen::VectorXd mu = Eigen::VectorXd::Constant(size, q);
    int offset = 0;
    for (int i = 0; i < community; ++i) offset += counts(quarter, i);
    mu.segment(offset, counts(quarter, community)).setConstant(p);
    return mu;
}

PopulationMoments population_moments(const SbmParams& params,
                                     const std::array<int, 4>& quarter_sizes,
                                     const Eigen::VectorXd& omega) {
    params.validate();
    if (omega.size() != params.k) throw DimensionError("omega must have length k");
    if (!omega.allFinite()) throw NumericError("omega must be finite");
    for (int size : quarter_sizes)
        if (size < 1) throw ParameterError("quarter sizes must be positive");

    PopulationMoments pop;
    pop.omega = omega;
    pop.quarter_sizes = quarter_sizes;
    pop.p = params.p;
    pop.q = params.q;
    pop.alpha = Eigen::Map<const Eigen::VectorXd>(params.alpha.data(), params.k);

    pop.counts.resize(4, params.k);
    for (int qtr = 0; qtr < 4; ++qtr) {
        const auto counts = apportion(pop.alpha, quarter_sizes[qtr]);
        for (int i = 0; i < params.k; ++i) {
            pop.counts(qtr, i) = counts[i];
            if (counts[i] == 0) pop.rank_deficient = true;
        }
    }

    const int n1 = quarter_sizes[0], n2 = quarter_sizes[1], n3 = quarter_sizes[2];
    Moments& m = pop.moments;
    m.A1 = Eigen::MatrixXd::Zero(n1, n3);
    m.A2 = Eigen::MatrixXd::Zero(n2, n3);
    m.m1 = Eigen::VectorXd::Zero(n1);
    m.B = Eigen::MatrixXd::Zero(n1, n2);

    // Column block for community i spans counts(2, i) columns of P3, scaled
    // so the block contributes exactly alpha_i mu mu' to A A'. When
    // alpha_i n3 is an integer this is literally E[X_{P,P3}] / sqrt(n3).
    int col = 0;
    for (int i = 0; i < params.k; ++i) {
        const int block = pop.counts(2, i);
        if (block == 0) continue;
        const double scale = std::sqrt(pop.alpha[i] / block);
        const Eigen::VectorXd mu1 = pop.mu_restriction(0, i);
        const Eigen::VectorXd mu2 = pop.mu_restriction(1, i);
        for (int c = 0; c < block; ++c) {
            m.A1.col(col + c) = scale * mu1;
            m.A2.col(col + c) = scale * mu2;
        }
        col += block;
        m.m1 += pop.alpha[i] * mu1;
        m.B += pop.alpha[i] * omega[i] * mu1 * mu2.transpose();
    }
    // Communities with an empty P3 block still contribute to m1 and B.
    for (int i = 0; i < params.k; ++i) {
        if (pop.counts(2, i) != 0) continue;
        const Eigen::VectorXd mu1 = pop.mu_restriction(0, i);
        const Eigen::VectorXd mu2 = pop.mu_restriction(1, i);
        m.m1 += pop.alpha[i] * mu1;
        m.B += pop.alpha[i] * omega[i] * mu1 * mu2.transpose();
    }
    return pop;
}

ConditionReport evaluate_conditions(const SbmParams& params, const GroundTruth& truth,
                                    const Eigen::VectorXd& weights, int target) {
    const int n = static_cast<int>(truth.assignment.size());
    if (weights.size() != n) throw DimensionError("weights length must equal node count");
    if (target < 0 || target >= truth.k) throw IndexError("target community out of range");

    ConditionReport rep;
    rep.omega_hat = Eigen::VectorXd::Zero(truth.k);
    Eigen::VectorXd count = Eigen::VectorXd::Zero(truth.k);
    for (int j = 0; j < n; ++j) {
        rep.omega_hat[truth.assignment[j]] += weights[j];
        count[truth.assignment[j]] += 1.0;
    }
    rep.omega_hat.array() /= count.array();

    rep.sigma1 = rep.omega_hat[target];
    rep.sigma2 = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < truth.k; ++i)
        if (i != target) rep.sigma2 = std::max(rep.sigma2, rep.omega_hat[i]);
    if (truth.k == 1) rep.sigma2 = 0.0;
    rep.sigma_gap = rep.sigma1 - rep.sigma2;
    rep.a1_holds = true;
    for (int i = 0; i < truth.k; ++i)
        if (i != target && !(rep.sigma1 > rep.omega_hat[i])) rep.a1_holds = false;

    // gamma2 uses the empirical community means in place of the (unknown)
    // true conditional means.
    rep.gamma2 = 0.0;
    for (int j = 0; j < n; ++j)
        rep.gamma2 = std::max(rep.gamma2, std::abs(weights[j] - rep.omega_hat[truth.assignment[j]]));

    rep.a2_ratio = rep.sigma_gap > 0.0 ? rep.gamma2 / rep.sigma_gap
                                       : std::numeric_limits<double>::quiet_NaN();

    const double a_max = *std::max_element(params.alpha.begin(), params.alpha.end());
    const double a_min = *std::min_element(params.alpha.begin(), params.alpha.end());
    const double p = params.p, q = params.q;
    const double xi = std::sqrt(std::log(std::max(std::log(static_cast<double>(std::max(n, 3))), 1.0 + 1e-9)));
    const double gap4 = std::pow(p - q, 4), gap5 = std::pow(p - q, 5);
    const double term1 = std::pow(a_min, 4) * gap4 / (std::pow(a_max, 4) * std::pow(p, 4) * xi);
    const double term2 =
        std::pow(a_min, 5) * std::sqrt(static_cast<double>(n)) * gap5 /
            (std::pow(a_max, 4) * std::pow(p, 4.5) * xi) -
        1.0;
    rep.a2_bound = std::min(term1, term2);
    rep.a3_lhs = (p - q) * (p - q) / (p * std::sqrt(p));
    rep.a3_rhs = a_max / (a_min * a_min * std::sqrt(static_cast<double>(n)));
    return rep;
}

std::string to_json(const ConditionReport& report) {
    nlohmann::json j;
    j["a1_holds"] = report.a1_holds;
    j["sigma1"] = report.sigma1;
    j["sigma2"] = report.sigma2;
    j["sigma_gap"] = report.sigma_gap;
    j["gamma2"] = report.gamma2;
    j["a2_ratio"] = report.a2_ratio;
    j["a2_bound"] = report.a2_bound;
    j["a3_lhs"] = report.a3_lhs;
    j["a3_rhs"] = report.a3_rhs;
    j["omega_hat"] =
        std::vector<double>(report.omega_hat.data(), report.omega_hat.data() + report.omega_hat.size());
    return j.dump();
}

}  // namespace csearch
