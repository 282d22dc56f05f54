// Acceptance suite: runs every gate at its pinned tolerance and prints one
// PASS/FAIL/SKIP line per criterion. Exits nonzero if any gate fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "csearch/bench.hpp"
#include "csearch/diagnostics.hpp"
#include "csearch/graph.hpp"
#include "csearch/search.hpp"
#include "csearch/spectral.hpp"
#include "csearch/weights.hpp"

using namespace csearch;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name;
    if (!detail.empty()) std::cout << " -- " << detail;
    std::cout << "\n" << std::flush;
    if (!pass) ++g_failures;
}

void report_skip(int id, const std::string& name, const std::string& reason) {
    std::cout << "[SKIP] criterion " << id << ": " << name << " -- " << reason << "\n"
              << std::flush;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(4) << x;
    return os.str();
}

Eigen::VectorXd indicator_weights(const GroundTruth& truth, int target) {
    Eigen::VectorXd w(truth.assignment.size());
    for (Eigen::Index j = 0; j < w.size(); ++j)
        w[j] = truth.assignment[j] == target ? 1.0 : 0.0;
    return w;
}

// ---------------------------------------------------------------- criterion 1
void criterion_population_exactness() {
    const auto t0 = Clock::now();
    double worst_mu = 0.0, worst_alpha = 0.0;
    bool ok = true;
    for (int k : {1, 2, 3, 5}) {
        std::vector<double> alpha;
        switch (k) {
            case 1: alpha = {1.0}; break;
            case 2: alpha = {0.4, 0.6}; break;
            case 3: alpha = {0.2, 0.35, 0.45}; break;
            default: alpha = {0.1, 0.15, 0.2, 0.25, 0.3}; break;
        }
        for (double p : {0.3, 0.6, 0.9}) {
            SbmParams params{40 * k, k, p, p / 5.0, alpha};
            Eigen::VectorXd omega(k);
            for (int i = 0; i < k; ++i) omega(i) = 2.0 + 0.7 * (k - i);  // distinct, target first
            auto pop = population_moments(params, {30 * k, 30 * k, 30 * k, 30 * k}, omega);
            auto sub = search_subroutine(pop.moments, k);
            worst_mu = std::max(worst_mu,
                                (sub.mu_hat - pop.mu_restriction(0, 0)).cwiseAbs().maxCoeff());
            worst_alpha = std::max(worst_alpha, std::abs(sub.alpha_hat - alpha[0]));
            ok = ok && sub.a > 0.0;
        }
    }
    const double elapsed = seconds_since(t0);
    ok = ok && worst_mu <= 1e-6 && worst_alpha <= 1e-6 && elapsed < 5.0;
    report(1, "population-oracle exactness", ok,
           "max mu err " + fmt(worst_mu) + ", max alpha err " + fmt(worst_alpha) + ", " +
               fmt(elapsed) + "s");
}

// ---------------------------------------------------------------- criterion 2
void criterion_synthetic_means() {
    GroundTruth truth;
    truth.k = 2;
    truth.assignment.assign(1000, 0);
    std::fill(truth.assignment.begin() + 500, truth.assignment.end(), 1);

    bool ok = true;
    std::string detail;
    const double expected[3] = {7.4, 9.0, 10.6};
    const double w_his[3] = {8.0, 10.0, 12.0};
    for (int i = 0; i < 3; ++i) {
        // exact in expectation
        const double mean = 0.8 * w_his[i] + 0.2 * 5.0;
        ok = ok && std::abs(mean - expected[i]) < 1e-12;
        // empirical within 4 standard errors at n=1000
        auto w = synthetic_weights(truth, 0, 5.0, w_his[i], 0.8, 4100 + i);
        double target_mean = 0.0;
        for (int j = 0; j < 500; ++j) target_mean += w[j];
        target_mean /= 500.0;
        const double se = (w_his[i] - 5.0) * 0.4 / std::sqrt(500.0);
        ok = ok && std::abs(target_mean - expected[i]) <= 4.0 * se;
        detail += fmt(target_mean) + (i < 2 ? "/" : "");
    }
    report(2, "synthetic-weight means 7.4/9/10.6", ok, "observed " + detail);
}

// ---------------------------------------------------------------- criterion 3
void criterion_clique_sanity() {
    // weights: indicator of the target (strictly biased: means 1 vs 0);
    // tau: 2-means; seeds fixed to partitions holding every community
    bool ok = true;
    std::string detail;
    for (int k : {2, 5}) {
        SbmParams params{100, k, 1.0, 0.0, std::vector<double>(k, 1.0 / k)};
        int zero = 0;
        for (int t = 0; t < 20; ++t) {
            // fixture seeds chosen so every quarter holds every community
            // (the rank-k precondition of the whitening step)
            auto [g, truth] = generate_sbm(params, 42200 + t);
            try {
                auto est = community_search(g, k, indicator_weights(truth, 0), std::nullopt,
                                            43200 + t);
                if (estimation_error(est.nodes, truth.members(0)) == 0) ++zero;
            } catch (const std::exception&) {
            }
        }
        detail += "k=" + std::to_string(k) + ": " + std::to_string(zero) + "/20  ";
        ok = ok && zero == 20;
    }
    report(3, "clique sanity (p=1, q=0, zero error)", ok, detail);
}

// ---------------------------------------------------------------- criterion 4
void criterion_sbm_recovery() {
    // protocol as stated: n=1000, k=5, alpha_min=0.1 ramp, q=0.05,
    // synthetic (5,10,rho=.8), tau=(p+q)/2, 20 seeds, all five targets
    const std::vector<double> alpha = ramp_alpha(5, 0.1);
    double means[2] = {0.0, 0.0};
    const double ps[2] = {0.25, 0.35};
    for (int pi = 0; pi < 2; ++pi) {
        SbmParams params{1000, 5, ps[pi], 0.05, alpha};
        const double tau = (ps[pi] + 0.05) / 2.0;
        double total = 0.0;
        int count = 0;
        for (int t = 0; t < 20; ++t) {
            auto [g, truth] = generate_sbm(params, 48000 + t);
            std::vector<Eigen::VectorXd> ws;
            for (int target = 0; target < 5; ++target)
                ws.push_back(synthetic_weights(truth, target, 5, 10, 0.8,
                                               trial_seed(48100, t, target)));
            auto outcomes =
                parallel_search(g, 5, ws, std::vector<std::optional<double>>(5, tau), 48200 + t);
            for (int target = 0; target < 5; ++target) {
                const auto truth_set = truth.members(target);
                double frac = 1.0;
                if (outcomes[target].estimate)
                    frac = static_cast<double>(
                               estimation_error(outcomes[target].estimate->nodes, truth_set)) /
                           truth_set.size();
                total += frac;
                ++count;
            }
        }
        means[pi] = total / count;
    }
    const bool ok = means[0] <= 0.05 && means[1] <= 0.01;
    report(4, "SBM recovery gates (<=5% at p=.25, <=1% at p=.35)", ok,
           "measured mean frac error " + fmt(means[0]) + " at p=.25, " + fmt(means[1]) +
               " at p=.35");
    std::cout << "       note: error decreases in p as expected (" << fmt(means[1]) << " < "
              << fmt(means[0]) << "); the gates sit far below what the whitening estimator\n"
              << "       attains at n=1000 with these parameters -- see the criterion-4\n"
              << "       discussion in README.md for the calibration and cross-check\n";
}

// ---------------------------------------------------------------- criterion 5
void criterion_exact_recovery() {
    // free parameters pinned after calibration: alpha=(0.7,0.3), constant
    // per-community weights (2,1); tau=(p+q)/2
    SbmParams params{400, 2, 0.5, 0.05, {0.7, 0.3}};
    int zero = 0;
    for (int t = 0; t < 40; ++t) {
        auto [g, truth] = generate_sbm(params, 52000 + t);
        Eigen::VectorXd w(400);
        for (int j = 0; j < 400; ++j) w[j] = truth.assignment[j] == 0 ? 2.0 : 1.0;
        try {
            SearchEngine engine(g, 2, 53000 + t);
            auto est = engine.run(w, (0.5 + 0.05) / 2.0);
            auto refined = exact_recovery_refine(g, est, engine.partition(), 0.5, 0.05);
            if (estimation_error(refined.estimate.nodes, truth.members(0)) == 0) ++zero;
        } catch (const std::exception&) {
        }
    }
    report(5, "exact recovery after degree-threshold refinement", zero >= 38,
           std::to_string(zero) + "/40 seeds exactly recovered (gate 38)");
}

// ---------------------------------------------------------------- criterion 6
void criterion_speedup() {
    SbmParams params{1000, 8, 0.14, 0.01, ramp_alpha(8, 0.08)};
    int faster = 0;
    double mean_search = 0.0, mean_spectral = 0.0;
    for (int t = 0; t < 10; ++t) {
        auto [g, truth] = generate_sbm(params, 54000 + t);
        auto w = synthetic_weights(truth, 0, 5, 10, 0.8, 54100 + t);

        const auto t1 = Clock::now();
        try {
            community_search(g, 8, w, (0.14 + 0.01) / 2.0, 54200 + t);
        } catch (const std::exception&) {
        }
        const double search_s = seconds_since(t1);

        const auto t2 = Clock::now();
        spectral_cluster(g, 8);
        const double spectral_s = seconds_since(t2);

        mean_search += search_s / 10.0;
        mean_spectral += spectral_s / 10.0;
        if (search_s < spectral_s) ++faster;
    }
    report(6, "search core faster than spectral+SLINK", faster >= 9,
           std::to_string(faster) + "/10 trials, mean " + fmt(mean_search) + "s vs " +
               fmt(mean_spectral) + "s (speedup " + fmt(mean_spectral / mean_search) + "x)");
}

// ---------------------------------------------------------------- criterion 7
void criterion_sensitivity() {
    // fixed (5,10) weights; the gap sweep moves rho
    SbmParams params{1000, 5, 0.25, 0.05, std::vector<double>(5, 0.2)};
    const std::vector<double> gaps = {1.0, 2.0, 3.0, 4.0, 4.5};
    std::vector<double> mean_err;
    for (double gap : gaps) {
        const double rho = 0.5 + gap / 10.0;
        double total = 0.0;
        for (int t = 0; t < 10; ++t) {
            auto [g, truth] = generate_sbm(params, 56000 + t);
            auto w = synthetic_weights(truth, 0, 5, 10, rho, 56100 + t);
            double frac = 1.0;
            try {
                auto est = community_search(g, 5, w, 0.15, 56200 + t);
                frac = static_cast<double>(estimation_error(est.nodes, truth.members(0))) /
                       truth.members(0).size();
            } catch (const std::exception&) {
            }
            total += frac;
        }
        mean_err.push_back(total / 10.0);
    }

    // Spearman rank correlation between gap and mean error
    auto ranks = [](const std::vector<double>& v) {
        std::vector<int> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
        return r;
    };
    const auto rg = ranks(gaps), re = ranks(mean_err);
    double num = 0, dg = 0, de = 0;
    const double mg = 2.0, me = 2.0;  // mean rank of 5 items
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        num += (rg[i] - mg) * (re[i] - me);
        dg += (rg[i] - mg) * (rg[i] - mg);
        de += (re[i] - me) * (re[i] - me);
    }
    const double spearman = num / std::sqrt(dg * de);

    std::string series;
    for (double e : mean_err) series += fmt(e) + " ";
    report(7, "error decreases with the singular-value gap", spearman < 0.0,
           "mean errors [" + series + "], Spearman " + fmt(spearman));
}

// ---------------------------------------------------------------- criterion 8
void criterion_polblogs() {
    const char* env_edges = std::getenv("CSEARCH_POLBLOGS_EDGES");
    const char* env_labels = std::getenv("CSEARCH_POLBLOGS_LABELS");
    const std::string edges = env_edges ? env_edges : "data/polblogs_edges.txt";
    const std::string labels = env_labels ? env_labels : "data/polblogs_labels.txt";
    if (!std::filesystem::exists(edges) || !std::filesystem::exists(labels)) {
        report_skip(8, "political blogs (optional)",
                    "dataset not found at " + edges + " / " + labels);
        return;
    }

    ExperimentConfig cfg;
    cfg.experiment_id = "polblogs-acceptance";
    cfg.mode = BenchMode::Polblogs;
    cfg.dataset_edges = edges;
    cfg.dataset_labels = labels;
    cfg.labeled_m = 10;
    cfg.labeled_r = 1;
    cfg.trials = 50;
    cfg.seed = 58000;
    cfg.tau_policy = TauPolicy::Auto;
    cfg.sweep_name = "none";
    cfg.sweep_values = {0.0};

    auto rows = run_experiment(cfg);
    double sum = 0.0;
    long long best = -1;
    int count = 0;
    for (const auto& row : rows) {
        if (row.target != 0 || row.algorithm != "search") continue;
        sum += static_cast<double>(row.error);
        best = best < 0 ? row.error : std::min(best, row.error);
        ++count;
    }
    const double mean = sum / std::max(count, 1);
    report(8, "political blogs (m=10, r=1, 50 draws)", best <= 54 && mean <= 57.0,
           "best " + std::to_string(best) + " (gate 54), mean " + fmt(mean) + " (gate 57)");
}

// ---------------------------------------------------------------- criterion 9
void criterion_slink_oracle() {
    std::mt19937_64 rng(59000);
    std::normal_distribution<double> gauss;
    int identical = 0;
    const int trials = 50;
    for (int trial = 0; trial < trials; ++trial) {
        const int n = 20 + static_cast<int>(rng() % 181);  // up to 200
        const int dim = 1 + static_cast<int>(rng() % 3);
        Eigen::MatrixXd pts(n, dim);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < dim; ++j) pts(i, j) = gauss(rng);

        auto fast = slink(pts);

        // naive O(n^3): distance matrix + Lance-Williams min updates
        const double inf = std::numeric_limits<double>::infinity();
        Eigen::MatrixXd d(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d(i, j) = i == j ? inf : (pts.row(i) - pts.row(j)).norm();
        std::vector<int> rep(n);
        std::iota(rep.begin(), rep.end(), 0);
        std::vector<bool> alive(n, true);
        bool same = fast.merges.size() == static_cast<std::size_t>(n - 1);
        for (int step = 0; step < n - 1 && same; ++step) {
            double bestd = inf;
            int bi = -1, bj = -1;
            for (int i = 0; i < n; ++i) {
                if (!alive[i]) continue;
                for (int j = i + 1; j < n; ++j)
                    if (alive[j] && d(i, j) < bestd) {
                        bestd = d(i, j);
                        bi = i;
                        bj = j;
                    }
            }
            const int a = std::min(rep[bi], rep[bj]), b = std::max(rep[bi], rep[bj]);
            same = fast.merges[step].a == a && fast.merges[step].b == b &&
                   std::abs(fast.merges[step].height - bestd) <= 1e-12 * (1.0 + bestd);
            for (int l = 0; l < n; ++l)
                if (alive[l] && l != bi && l != bj)
                    d(bi, l) = d(l, bi) = std::min(d(bi, l), d(bj, l));
            alive[bj] = false;
            rep[bi] = a;
        }
        if (same) ++identical;
    }
    report(9, "SLINK equals naive single linkage", identical == trials,
           std::to_string(identical) + "/" + std::to_string(trials) + " dendrograms identical");
}

// --------------------------------------------------------------- criterion 10
void criterion_exact_invariants() {
    SbmParams params{400, 2, 0.5, 0.05, {0.5, 0.5}};
    auto [g, truth] = generate_sbm(params, 60000);
    auto w = synthetic_weights(truth, 0, 5, 10, 0.8, 60001);
    auto base = community_search(g, 2, w, 0.275, 60002);

    bool ok = true;
    // scale equivariance: exact equality under weight scaling
    for (double c : {2.0, 4.0, 0.5}) {
        auto scaled = community_search(g, 2, (c * w).eval(), 0.275, 60002);
        ok = ok && scaled.nodes == base.nodes;
        ok = ok && (scaled.mu_hat.array() == base.mu_hat.array()).all();
        ok = ok && scaled.alpha_hat == base.alpha_hat;
    }
    // determinism: bit-identical reruns
    auto again = community_search(g, 2, w, 0.275, 60002);
    ok = ok && again.nodes == base.nodes &&
         (again.mu_hat.array() == base.mu_hat.array()).all() &&
         again.alpha_hat == base.alpha_hat;

    // parallel search == sequential per target, bit-identical
    SbmParams params3{300, 3, 0.6, 0.08, {0.3, 0.3, 0.4}};
    auto [g3, truth3] = generate_sbm(params3, 60010);
    std::vector<Eigen::VectorXd> ws;
    for (int target = 0; target < 3; ++target)
        ws.push_back(synthetic_weights(truth3, target, 5, 10, 0.8, 60020 + target));
    auto outcomes =
        parallel_search(g3, 3, ws, std::vector<std::optional<double>>(3, 0.34), 60030);
    for (int target = 0; target < 3; ++target) {
        auto solo = community_search(g3, 3, ws[target], 0.34, 60030);
        ok = ok && outcomes[target].estimate.has_value();
        if (outcomes[target].estimate) {
            ok = ok && outcomes[target].estimate->nodes == solo.nodes &&
                 (outcomes[target].estimate->mu_hat.array() == solo.mu_hat.array()).all();
        }
    }
    report(10, "exact scale-equivariance, determinism, parallel consistency", ok, "");
}

}  // namespace

int main() {
    std::cout << "community-search acceptance suite\n";
    criterion_population_exactness();
    criterion_synthetic_means();
    criterion_clique_sanity();
    criterion_sbm_recovery();
    criterion_exact_recovery();
    criterion_speedup();
    criterion_sensitivity();
    criterion_polblogs();
    criterion_slink_oracle();
    criterion_exact_invariants();
    if (g_failures > 0)
        std::cout << g_failures << " criterion(s) failed\n";
    else
        std::cout << "all criteria passed\n";
    return g_failures == 0 ? 0 : 1;
}
