#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "csearch/diagnostics.hpp"
#include "csearch/graph.hpp"
#include "csearch/search.hpp"
#include "csearch/weights.hpp"

using namespace csearch;

TEST_SUITE("diagnostics") {

TEST_CASE("population moments with a single community") {
    SbmParams params{100, 1, 0.6, 0.0, {1.0}};
    Eigen::VectorXd omega{{2.5}};
    auto pop = population_moments(params, {25, 25, 25, 25}, omega);
    CHECK_FALSE(pop.rank_deficient);

    // B = alpha_1 omega_1 mu mu' with alpha_1 = 1
    const Eigen::VectorXd mu1 = pop.mu_restriction(0, 0);
    const Eigen::VectorXd mu2 = pop.mu_restriction(1, 0);
    CHECK((pop.moments.B - 2.5 * mu1 * mu2.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((pop.moments.m1 - mu1).cwiseAbs().maxCoeff() <= 1e-12);

    // A1 is rank one
    auto svd = rank_k_svd(pop.moments.A1, 2);
    CHECK(svd.D(1) <= 1e-10 * svd.D(0));
}

TEST_CASE("population counts follow largest-remainder apportionment") {
    SbmParams params{400, 3, 0.5, 0.1, {0.23, 0.36, 0.41}};
    Eigen::VectorXd omega{{3.0, 2.0, 1.0}};
    auto pop = population_moments(params, {101, 103, 97, 99}, omega);
    for (int q = 0; q < 4; ++q) {
        int sum = 0;
        for (int i = 0; i < 3; ++i) sum += pop.counts(q, i);
        CHECK(sum == pop.quarter_sizes[q]);
    }
    // quarter 0: 101 * (0.23, 0.36, 0.41) = (23.23, 36.36, 41.41) -> (23, 36, 42)
    CHECK(pop.counts(0, 0) == 23);
    CHECK(pop.counts(0, 1) == 36);
    CHECK(pop.counts(0, 2) == 42);

    // membership restriction pattern: p on the block, q elsewhere
    const auto mu = pop.mu_restriction(0, 1);
    CHECK(mu.head(23).maxCoeff() == 0.1);
    CHECK(mu.segment(23, 36).minCoeff() == 0.5);
    CHECK(mu.tail(42).maxCoeff() == 0.1);
}

TEST_CASE("cross-module oracle: subroutine recovers the target exactly") {
    SbmParams params{400, 2, 0.9, 0.1, {0.5, 0.5}};
    Eigen::VectorXd omega{{2.0, 1.0}};
    auto pop = population_moments(params, {100, 100, 100, 100}, omega);
    auto sub = search_subroutine(pop.moments, 2);
    CHECK((sub.mu_hat - pop.mu_restriction(0, 0)).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(std::abs(sub.alpha_hat - 0.5) <= 1e-6);
}

TEST_CASE("equal omegas make the top of R degenerate") {
    SbmParams params{300, 3, 0.7, 0.1, {0.3, 0.3, 0.4}};
    Eigen::VectorXd omega = Eigen::VectorXd::Constant(3, 2.0);
    auto pop = population_moments(params, {75, 75, 75, 75}, omega);
    auto sub = search_subroutine(pop.moments, 3);
    CHECK(std::abs(sub.sigma1 - sub.sigma2) <= 1e-9 * sub.sigma1);
}

TEST_CASE("rank-deficiency warning when a quarter misses a community") {
    SbmParams params{100, 5, 0.5, 0.1, {0.2, 0.2, 0.2, 0.2, 0.2}};
    Eigen::VectorXd omega{{5.0, 4.0, 3.0, 2.0, 1.0}};
    auto pop = population_moments(params, {3, 3, 3, 3}, omega);
    CHECK(pop.rank_deficient);
}

TEST_CASE("condition report on synthetic weights") {
    SbmParams params{4000, 2, 0.5, 0.1, {0.5, 0.5}};
    GroundTruth truth;
    truth.k = 2;
    truth.assignment.assign(4000, 0);
    std::fill(truth.assignment.begin() + 2000, truth.assignment.end(), 1);

    auto w = synthetic_weights(truth, 0, 5.0, 10.0, 0.8, 500);
    auto rep = evaluate_conditions(params, truth, w, 0);
    const double se = 5.0 * 0.4 / std::sqrt(2000.0);
    CHECK(std::abs(rep.sigma1 - 9.0) <= 4.0 * se);
    CHECK(std::abs(rep.sigma2 - 6.0) <= 4.0 * se);
    CHECK(std::abs(rep.sigma_gap - 3.0) <= 8.0 * se);
    CHECK(rep.a1_holds);
    // gamma2: max deviation from the community mean is about |5 - 9| = 4
    CHECK(rep.gamma2 > 3.5);
    CHECK(rep.gamma2 < 4.5);
    CHECK(rep.a2_ratio == doctest::Approx(rep.gamma2 / rep.sigma_gap));
}

TEST_CASE("equal communities reduce the separation bound to k over sqrt n") {
    SbmParams params{900, 3, 0.4, 0.1, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
    GroundTruth truth;
    truth.k = 3;
    for (int i = 0; i < 900; ++i) truth.assignment.push_back(i / 300);
    auto rep = evaluate_conditions(params, truth, Eigen::VectorXd::Ones(900), 0);
    CHECK(rep.a3_rhs == doctest::Approx(3.0 / std::sqrt(900.0)));
    CHECK(rep.a3_lhs == doctest::Approx(0.09 / (0.4 * std::sqrt(0.4))));
}

TEST_CASE("constant weights: zero gap, zero deviation, A1 fails") {
    SbmParams params{100, 2, 0.5, 0.1, {0.5, 0.5}};
    GroundTruth truth;
    truth.k = 2;
    for (int i = 0; i < 100; ++i) truth.assignment.push_back(i / 50);
    auto rep = evaluate_conditions(params, truth, Eigen::VectorXd::Constant(100, 7.0), 0);
    CHECK(rep.sigma_gap == 0.0);
    CHECK(rep.gamma2 == 0.0);
    CHECK_FALSE(rep.a1_holds);
    CHECK(std::isnan(rep.a2_ratio));
}

TEST_CASE("condition report is invariant under node permutation") {
    SbmParams params{200, 2, 0.6, 0.1, {0.5, 0.5}};
    auto [g, truth] = generate_sbm(params, 9);
    auto w = synthetic_weights(truth, 0, 5.0, 10.0, 0.8, 10);
    auto rep = evaluate_conditions(params, truth, w, 0);

    std::mt19937_64 rng(11);
    std::vector<int> perm(200);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    GroundTruth ptruth;
    ptruth.k = 2;
    ptruth.assignment.resize(200);
    Eigen::VectorXd pw(200);
    for (int v = 0; v < 200; ++v) {
        ptruth.assignment[perm[v]] = truth.assignment[v];
        pw[perm[v]] = w[v];
    }
    auto prep = evaluate_conditions(params, ptruth, pw, 0);
    CHECK(prep.sigma1 == doctest::Approx(rep.sigma1).epsilon(1e-12));
    CHECK(prep.sigma2 == doctest::Approx(rep.sigma2).epsilon(1e-12));
    CHECK(prep.gamma2 == doctest::Approx(rep.gamma2).epsilon(1e-12));
    CHECK(prep.a1_holds == rep.a1_holds);
}

TEST_CASE("sigma gap matches the subroutine diagnostic on population moments") {
    SbmParams params{400, 3, 0.8, 0.2, {0.25, 0.35, 0.4}};
    Eigen::VectorXd omega{{4.0, 2.5, 1.5}};
    auto pop = population_moments(params, {100, 100, 100, 100}, omega);
    auto sub = search_subroutine(pop.moments, 3);

    // weights constant per community reproduce omega as empirical means
    GroundTruth truth;
    truth.k = 3;
    const auto sizes = params.community_sizes();
    for (int i = 0; i < 3; ++i)
        truth.assignment.insert(truth.assignment.end(), sizes[i], i);
    Eigen::VectorXd w(400);
    for (int v = 0; v < 400; ++v) w[v] = omega(truth.assignment[v]);
    auto rep = evaluate_conditions(params, truth, w, 0);

    CHECK(std::abs((sub.sigma1 - sub.sigma2) - rep.sigma_gap) <= 1e-6);
}

TEST_CASE("condition report serializes to json") {
    SbmParams params{100, 2, 0.5, 0.1, {0.5, 0.5}};
    GroundTruth truth;
    truth.k = 2;
    for (int i = 0; i < 100; ++i) truth.assignment.push_back(i / 50);
    Eigen::VectorXd w(100);
    for (int i = 0; i < 100; ++i) w[i] = truth.assignment[i] == 0 ? 2.0 : 1.0;
    const std::string j = to_json(evaluate_conditions(params, truth, w, 0));
    for (const char* key : {"a1_holds", "sigma1", "sigma2", "sigma_gap", "gamma2", "a2_ratio",
                            "a2_bound", "a3_lhs", "a3_rhs", "omega_hat"})
        CHECK(j.find(std::string("\"") + key + "\"") != std::string::npos);
    CHECK(j.find("\"a1_holds\":true") != std::string::npos);
}

TEST_CASE("a2 bound formula spot check") {
    SbmParams params{1000, 2, 0.5, 0.1, {0.4, 0.6}};
    GroundTruth truth;
    truth.k = 2;
    for (int i = 0; i < 1000; ++i) truth.assignment.push_back(i < 400 ? 0 : 1);
    auto rep = evaluate_conditions(params, truth, Eigen::VectorXd::Ones(1000), 0);

    const double xi = std::sqrt(std::log(std::log(1000.0)));
    const double t1 = std::pow(0.4, 4) * std::pow(0.4, 4) / (std::pow(0.6, 4) * std::pow(0.5, 4) * xi);
    const double t2 =
        std::pow(0.4, 5) * std::sqrt(1000.0) * std::pow(0.4, 5) /
            (std::pow(0.6, 4) * std::pow(0.5, 4.5) * xi) -
        1.0;
    CHECK(rep.a2_bound == doctest::Approx(std::min(t1, t2)).epsilon(1e-12));
}

}  // TEST_SUITE
