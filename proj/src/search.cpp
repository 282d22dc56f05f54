#include "csearch/search.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>

namespace csearch {

namespace {

constexpr double kSingularGuard = 1e-10;   // relative floor for D entries
constexpr double kWhiteningTol = 1e-8;     // W1' A1 A1' W1 == I check
constexpr double kWhiteningFloor = 1e-8;   // only check above this sigma_k

void check_weights(const Eigen::VectorXd& w, int n) {
    if (w.size() != n) throw DimensionError("weight vector length must equal node count");
    if (!w.allFinite()) throw NumericError("weights must be finite");
    if ((w.array() < 0.0).any()) throw ParameterError("weights must be nonnegative");
}

// Position of each node inside its quarter's sorted node list.
std::vector<int> quarter_positions(const PartitionScheme& part) {
    std::vector<int> pos(part.n, -1);
    for (const auto& quarter : part.quarters)
        for (std::size_t i = 0; i < quarter.size(); ++i) pos[quarter[i]] = static_cast<int>(i);
    return pos;
}

struct WhitenedRotation {
    TruncatedSvd svd1, svd2;
    Eigen::MatrixXd W1, W2;
    Eigen::VectorXd W1t_m1;
};

WhitenedRotation whiten(const Moments& m, int k) {
    WhitenedRotation wr;
    wr.svd1 = rank_k_svd(m.A1, k);
    wr.svd2 = rank_k_svd(m.A2, k);
    for (const auto* svd : {&wr.svd1, &wr.svd2}) {
        if (svd->D(k - 1) <= kSingularGuard * svd->D(0) || svd->D(k - 1) <= 0.0)
            throw SingularWhitening("sigma_k of a moment matrix is numerically zero");
    }
    wr.W1 = wr.svd1.U * wr.svd1.D.cwiseInverse().asDiagonal();
    wr.W2 = wr.svd2.U * wr.svd2.D.cwiseInverse().asDiagonal();
    wr.W1t_m1 = wr.W1.transpose() * m.m1;

    // By construction W1' A1 A1' W1 = I_k; a violation means the
    // decomposition itself went wrong.
    if (wr.svd1.D(k - 1) > kWhiteningFloor) {
        Eigen::MatrixXd gram = wr.W1.transpose() * (m.A1 * (m.A1.transpose() * wr.W1));
        gram.diagonal().array() -= 1.0;
        if (gram.cwiseAbs().maxCoeff() > kWhiteningTol)
            throw NumericError("whitening identity violated");
    }
    return wr;
}

struct ProjectedResult {
    Eigen::VectorXd mu_hat;
    double alpha_hat, sigma1, sigma2, a;
};

// Steps 3-6 of the subroutine, shared between the explicit-moments entry
// point and the engine: R's leading left singular vector, sign fix, unwhiten.
ProjectedResult project(const Eigen::MatrixXd& R, const Eigen::MatrixXd& U1D1,
                        const Eigen::VectorXd& W1t_m1) {
    LeadingTriplet top = leading_singular_triplet(R);
    if (top.sigma1 <= 0.0)
        throw DegenerateProjection("R is zero; the weights carry no signal for this rotation");
    double a = top.u.dot(W1t_m1);
    Eigen::VectorXd u = top.u;
    if (a < 0.0) {
        u = -u;
        a = -a;
    }
    if (a == 0.0) throw DegenerateProjection("projection u1' W1' m1 is zero");

    ProjectedResult out;
    out.mu_hat = (U1D1 * u) / a;
    out.alpha_hat = a * a;
    out.sigma1 = top.sigma1;
    out.sigma2 = top.sigma2;
    out.a = a;
    return out;
}

}  // namespace

Moments build_moments(const Graph& graph, const PartitionScheme& partition,
                      const Eigen::VectorXd& weights, const RoleMap& roles) {
    const int n = graph.num_nodes();
    if (partition.n != n) throw DimensionError("partition does not match graph");
    check_weights(weights, n);

    const auto& p1 = partition.quarters[roles[0]];
    const auto& p2 = partition.quarters[roles[1]];
    const auto& p3 = partition.quarters[roles[2]];
    const auto& p4 = partition.quarters[roles[3]];
    const int n1 = static_cast<int>(p1.size());
    const int n2 = static_cast<int>(p2.size());
    const int n3 = static_cast<int>(p3.size());
    const int n4 = static_cast<int>(p4.size());

    const auto pos = quarter_positions(partition);
    const auto& quarter_of = partition.quarter_of;

    Moments m;
    m.A1 = Eigen::MatrixXd::Zero(n1, n3);
    m.A2 = Eigen::MatrixXd::Zero(n2, n3);
    m.m1 = Eigen::VectorXd::Zero(n1);
    m.B = Eigen::MatrixXd::Zero(n1, n2);

    const double inv_sqrt_n3 = 1.0 / std::sqrt(static_cast<double>(n3));
    for (int col = 0; col < n3; ++col) {
        const int j = p3[col];
        for (int v : graph.neighbors(j)) {
            if (quarter_of[v] == roles[0]) m.A1(pos[v], col) = inv_sqrt_n3;
            else if (quarter_of[v] == roles[1]) m.A2(pos[v], col) = inv_sqrt_n3;
        }
    }

    for (int j : p1)
        for (int v : graph.neighbors(j))
            if (quarter_of[v] == roles[0]) m.m1[pos[v]] += 1.0;
    m.m1 /= static_cast<double>(n1);

    // B as a sum of weighted outer products of the sparse column slices.
    std::vector<int> nb1, nb2;
    for (int j : p4) {
        nb1.clear();
        nb2.clear();
        for (int v : graph.neighbors(j)) {
            if (quarter_of[v] == roles[0]) nb1.push_back(pos[v]);
            else if (quarter_of[v] == roles[1]) nb2.push_back(pos[v]);
        }
        const double wj = weights[j];
        if (wj == 0.0) continue;
        for (int a : nb1)
            for (int b : nb2) m.B(a, b) += wj;
    }
    m.B /= static_cast<double>(n4);
    return m;
}

SubroutineResult search_subroutine(const Moments& moments, int k) {
    const auto n1 = moments.A1.rows();
    const auto n2 = moments.A2.rows();
    const auto n3 = moments.A1.cols();
    if (moments.A2.cols() != n3) throw DimensionError("A1 and A2 must share columns");
    if (moments.m1.size() != n1 || moments.B.rows() != n1 || moments.B.cols() != n2)
        throw DimensionError("m1/B shapes inconsistent with A1, A2");
    if (k < 1 || k > std::min({n1, n2, n3}))
        throw DimensionError("k must not exceed any quarter size");

    const WhitenedRotation wr = whiten(moments, k);
    const Eigen::MatrixXd R = wr.W1.transpose() * moments.B * wr.W2;
    const Eigen::MatrixXd U1D1 = wr.svd1.U * wr.svd1.D.asDiagonal();
    const ProjectedResult pr = project(R, U1D1, wr.W1t_m1);

    SubroutineResult out;
    out.mu_hat = pr.mu_hat;
    out.alpha_hat = pr.alpha_hat;
    out.sigma1 = pr.sigma1;
    out.sigma2 = pr.sigma2;
    out.a = pr.a;
    return out;
}

std::vector<int> threshold_membership(const Eigen::VectorXd& mu_hat, double tau) {
    std::vector<int> out;
    for (Eigen::Index i = 0; i < mu_hat.size(); ++i)
        if (mu_hat[i] > tau) out.push_back(static_cast<int>(i));
    return out;
}

double auto_threshold(const Eigen::VectorXd& mu_hat) {
    const auto n = mu_hat.size();
    if (n < 2) throw ParameterError("auto_threshold needs at least 2 coordinates");

    std::vector<double> v(mu_hat.data(), mu_hat.data() + n);
    std::sort(v.begin(), v.end());
    if (v.front() == v.back()) throw DegenerateThreshold("all coordinates equal");

    std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + v[i];
        prefix_sq[i + 1] = prefix_sq[i] + v[i] * v[i];
    }
    // 2-means in one dimension reduces to the best split of the sorted
    // values. Scanning splits ascending and keeping strict improvements
    // leaves the largest upper cluster on ties.
    double best_sse = std::numeric_limits<double>::infinity();
    Eigen::Index best_split = 1;
    for (Eigen::Index s = 1; s < n; ++s) {
        const double lo_n = static_cast<double>(s), hi_n = static_cast<double>(n - s);
        const double lo_sum = prefix[s], hi_sum = prefix[n] - prefix[s];
        const double sse = (prefix_sq[s] - lo_sum * lo_sum / lo_n) +
                           (prefix_sq[n] - prefix_sq[s] - hi_sum * hi_sum / hi_n);
        if (sse < best_sse) {
            best_sse = sse;
            best_split = s;
        }
    }
    const double centroid_lo = prefix[best_split] / static_cast<double>(best_split);
    const double centroid_hi =
        (prefix[n] - prefix[best_split]) / static_cast<double>(n - best_split);
    return 0.5 * (centroid_lo + centroid_hi);
}

bool CommunityEstimate::degenerate(double rel_gap) const {
    for (const auto& rot : rotations)
        if (rot.sigma1 - rot.sigma2 > rel_gap * rot.sigma1) return false;
    return true;
}

SearchEngine::SearchEngine(const Graph& graph, int k, std::uint64_t seed)
    : graph_(&graph), k_(k), partition_(partition_nodes(graph.num_nodes(), seed)) {
    if (k < 1) throw ParameterError("k must be positive");
    if (graph.num_nodes() < 4 * k)
        throw ParameterError("need n >= 4k so each quarter supports rank-k moments");

    // Weight-independent part of each rotation. B is cheap to rebuild per
    // target; the SVDs are not.
    const Eigen::VectorXd unit = Eigen::VectorXd::Ones(graph.num_nodes());
    for (int r = 0; r < 4; ++r) {
        const RoleMap roles = rotation_roles(r);
        const Moments m = build_moments(graph, partition_, unit, roles);
        const WhitenedRotation wr = whiten(m, k);
        rotations_[r] = Rotation{roles, wr.W1, wr.W2,
                                 Eigen::MatrixXd(wr.svd1.U * wr.svd1.D.asDiagonal()),
                                 wr.W1t_m1};
    }
}

CommunityEstimate SearchEngine::run(const Eigen::VectorXd& weights,
                                    std::optional<double> tau) const {
    const int n = graph_->num_nodes();
    check_weights(weights, n);

    CommunityEstimate est;
    est.mu_hat = Eigen::VectorXd::Zero(n);
    double alpha_sum = 0.0;
    const auto pos = quarter_positions(partition_);

    for (int r = 0; r < 4; ++r) {
        const Rotation& rot = rotations_[r];
        const auto& p1 = partition_.quarters[rot.roles[0]];
        const auto& p4 = partition_.quarters[rot.roles[3]];

        // R accumulated directly in whitened coordinates: each j in P4
        // contributes w_j (W1' x1)(W2' x2)'.
        Eigen::MatrixXd R = Eigen::MatrixXd::Zero(k_, k_);
        Eigen::VectorXd y1(k_), y2(k_);
        for (int j : p4) {
            const double wj = weights[j];
            if (wj == 0.0) continue;
            y1.setZero();
            y2.setZero();
            bool any1 = false, any2 = false;
            for (int v : graph_->neighbors(j)) {
                const int q = partition_.quarter_of[v];
                if (q == rot.roles[0]) {
                    y1 += rot.W1.row(pos[v]).transpose();
                    any1 = true;
                } else if (q == rot.roles[1]) {
                    y2 += rot.W2.row(pos[v]).transpose();
                    any2 = true;
                }
            }
            if (any1 && any2) R += wj * (y1 * y2.transpose());
        }
        R /= static_cast<double>(p4.size());

        const ProjectedResult pr = project(R, rot.U1D1, rot.W1t_m1);
        const double tau_r = tau ? *tau : auto_threshold(pr.mu_hat);

        for (std::size_t i = 0; i < p1.size(); ++i) {
            est.mu_hat[p1[i]] = pr.mu_hat[static_cast<Eigen::Index>(i)];
            if (pr.mu_hat[static_cast<Eigen::Index>(i)] > tau_r) est.nodes.push_back(p1[i]);
        }
        est.rotations[r] = RotationDiag{pr.sigma1, pr.sigma2, pr.alpha_hat, tau_r};
        alpha_sum += pr.alpha_hat;
    }
    est.alpha_hat = alpha_sum / 4.0;
    std::sort(est.nodes.begin(), est.nodes.end());
    if (est.nodes.empty()) throw EmptyEstimate("no node passed the threshold in any rotation");
    return est;
}

CommunityEstimate community_search(const Graph& graph, int k, const Eigen::VectorXd& weights,
                                   std::optional<double> tau, std::uint64_t seed) {
    return SearchEngine(graph, k, seed).run(weights, tau);
}

RefineResult exact_recovery_refine(const Graph& graph, const CommunityEstimate& estimate,
                                   const PartitionScheme& partition, double p, double q) {
    if (partition.n != graph.num_nodes()) throw DimensionError("partition does not match graph");

    std::vector<char> in_estimate(partition.n, 0);
    for (int v : estimate.nodes) in_estimate[v] = 1;

    RefineResult res;
    res.estimate = estimate;
    res.estimate.nodes.clear();

    for (int r = 0; r < 4; ++r) {
        const int source = rotation_roles(r)[0];
        const int target = rotation_roles(r)[1];

        std::vector<char> in_source(partition.n, 0);
        long source_size = 0;
        for (int v : partition.quarters[source])
            if (in_estimate[v]) {
                in_source[v] = 1;
                ++source_size;
            }

        if (source_size == 0) {
            res.skipped[r] = true;
            for (int v : partition.quarters[target])
                if (in_estimate[v]) res.estimate.nodes.push_back(v);
            continue;
        }

        const double tau2 = static_cast<double>(source_size) * (p + q) / 2.0;
        for (int j : partition.quarters[target]) {
            long deg = 0;
            for (int v : graph.neighbors(j)) deg += in_source[v];
            if (static_cast<double>(deg) >= tau2) res.estimate.nodes.push_back(j);
        }
    }
    std::sort(res.estimate.nodes.begin(), res.estimate.nodes.end());
    return res;
}

std::pair<double, double> estimate_densities(const Graph& graph, const std::vector<int>& nodes) {
    const int n = graph.num_nodes();
    std::vector<char> in_set(n, 0);
    for (int v : nodes) in_set[v] = 1;
    const long s = static_cast<long>(nodes.size());

    long within = 0, across = 0;
    for (const auto& [u, v] : graph.edges()) {
        if (in_set[u] && in_set[v]) ++within;
        else if (in_set[u] != in_set[v]) ++across;
    }
    const double within_pairs = 0.5 * static_cast<double>(s) * static_cast<double>(s - 1);
    const double cross_pairs = static_cast<double>(s) * static_cast<double>(n - s);
    const double p_hat = within_pairs > 0.0 ? within / within_pairs : 0.0;
    const double q_hat = cross_pairs > 0.0 ? across / cross_pairs : 0.0;
    return {p_hat, q_hat};
}

std::vector<TargetOutcome> parallel_search(const Graph& graph, int k,
                                           const std::vector<Eigen::VectorXd>& weight_vectors,
                                           const std::vector<std::optional<double>>& taus,
                                           std::uint64_t seed) {
    if (taus.size() != weight_vectors.size())
        throw DimensionError("one tau entry per weight vector required");

    const SearchEngine engine(graph, k, seed);

    std::vector<std::future<CommunityEstimate>> futures;
    futures.reserve(weight_vectors.size());
    for (std::size_t t = 0; t < weight_vectors.size(); ++t) {
        futures.push_back(std::async(std::launch::async, [&, t] {
            return engine.run(weight_vectors[t], taus[t]);
        }));
    }

    std::vector<TargetOutcome> out(weight_vectors.size());
    for (std::size_t t = 0; t < weight_vectors.size(); ++t) {
        try {
            out[t].estimate = futures[t].get();
        } catch (const std::exception& e) {
            out[t].error = e.what();
        }
    }
    return out;
}

}  // namespace csearch
