#include "csearch/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "csearch/diagnostics.hpp"
#include "csearch/spectral.hpp"
#include "csearch/weights.hpp"

namespace csearch {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Everything a sweep point changes relative to the base config.
struct SweepPoint {
    SbmParams params;
    double rho;
    int m;
    int k_alg;
};

SweepPoint make_point(const ExperimentConfig& cfg, double value) {
    SweepPoint pt{cfg.sbm, cfg.rho, cfg.labeled_m, cfg.search_k > 0 ? cfg.search_k : cfg.sbm.k};
    if (cfg.sweep_name == "p_minus_q") {
        if (cfg.sweep_fixes_p)
            pt.params.q = pt.params.p - value;
        else
            pt.params.p = pt.params.q + value;
    } else if (cfg.sweep_name == "sigma_gap") {
        // gap = (2 rho - 1)(w_hi - w_lo) for the synthetic protocol
        pt.rho = 0.5 + value / (2.0 * (cfg.w_hi - cfg.w_lo));
        if (!(pt.rho > 0.0 && pt.rho < 1.0))
            throw ParameterError("sigma_gap sweep value outside the representable range");
    } else if (cfg.sweep_name == "m") {
        pt.m = static_cast<int>(std::lround(value));
        if (pt.m < 1) throw ParameterError("labeled-node count must be positive");
    } else if (cfg.sweep_name == "k") {
        pt.k_alg = static_cast<int>(std::lround(value));
        if (pt.k_alg < 1) throw ParameterError("swept k must be positive");
    } else if (cfg.sweep_name != "none") {
        throw ParameterError("unknown sweep axis: " + cfg.sweep_name);
    }
    return pt;
}

std::optional<double> resolve_tau(const ExperimentConfig& cfg, const SbmParams& params) {
    switch (cfg.tau_policy) {
        case TauPolicy::HalfPQ: return (params.p + params.q) / 2.0;
        case TauPolicy::Fixed: return cfg.tau_value;
        case TauPolicy::Auto: return std::nullopt;
    }
    return std::nullopt;
}

std::vector<int> sample_labeled(const std::vector<int>& members, int m, std::uint64_t seed) {
    if (m > static_cast<int>(members.size()))
        throw ParameterError("more labeled nodes requested than the community holds");
    std::mt19937_64 rng(seed);
    std::vector<int> out;
    std::sample(members.begin(), members.end(), std::back_inserter(out), m, rng);
    return out;  // std::sample preserves the sorted order
}

std::vector<int> union_sorted(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

ResultRow base_row(const ExperimentConfig& cfg, double sweep_value, int trial,
                   std::uint64_t seed, int target) {
    ResultRow row;
    row.experiment_id = cfg.experiment_id;
    row.sweep_name = cfg.sweep_name;
    row.sweep_value = sweep_value;
    row.trial = trial;
    row.seed = seed;
    row.target = target;
    return row;
}

// Search + baseline for one generated graph; shared by the SBM modes.
void run_sbm_trial(const ExperimentConfig& cfg, const SweepPoint& pt, double sweep_value,
                   int trial, std::uint64_t seed, std::vector<ResultRow>& rows) {
    const auto [graph, truth] = generate_sbm(pt.params, seed);

    std::vector<int> targets = cfg.targets;
    if (targets.empty()) {
        targets.resize(pt.params.k);
        std::iota(targets.begin(), targets.end(), 0);
    }

    const std::optional<double> tau = resolve_tau(cfg, pt.params);
    const bool labeled_mode =
        cfg.mode == BenchMode::LabeledNodes || cfg.mode == BenchMode::Parallel;

    std::vector<Eigen::VectorXd> weights(targets.size());
    std::vector<std::vector<int>> labels(targets.size());
    std::vector<double> gaps(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const std::uint64_t wseed = trial_seed(seed, 0xBEEF, static_cast<std::uint64_t>(i));
        if (labeled_mode) {
            labels[i] = sample_labeled(truth.members(targets[i]), pt.m, wseed);
            LabeledSet set{labels[i], targets[i]};
            weights[i] = labeled_weights(graph, set, cfg.labeled_r).w;
        } else {
            weights[i] =
                synthetic_weights(truth, targets[i], cfg.w_lo, cfg.w_hi, pt.rho, wseed);
        }
        gaps[i] = evaluate_conditions(pt.params, truth, weights[i], targets[i]).sigma_gap;
    }

    // Baseline first so search rows can report their speedup against it.
    double spectral_time = 0.0;
    Clustering clustering;
    if (cfg.run_spectral) {
        const auto t0 = Clock::now();
        clustering = spectral_cluster(graph, pt.k_alg);
        spectral_time = seconds_since(t0);
    }

    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto truth_set = truth.members(targets[i]);

        if (cfg.run_search && cfg.mode != BenchMode::Parallel) {
            ResultRow row = base_row(cfg, sweep_value, trial, seed, targets[i]);
            row.algorithm = "search";
            row.sigma_gap = gaps[i];
            try {
                const auto t0 = Clock::now();
                CommunityEstimate est = community_search(graph, pt.k_alg, weights[i], tau, seed);
                row.runtime_s = seconds_since(t0);
                auto nodes = est.nodes;
                if (labeled_mode) nodes = union_sorted(std::move(nodes), labels[i]);
                row.error = estimation_error(nodes, truth_set);
            } catch (const std::exception&) {
                row.error = static_cast<long long>(truth_set.size());
                row.failed = true;
                row.runtime_s = 0.0;
            }
            row.frac_error = static_cast<double>(row.error) / truth_set.size();
            if (cfg.run_spectral && !row.failed && row.runtime_s > 0.0)
                row.speedup = spectral_time / row.runtime_s;
            rows.push_back(std::move(row));
        }
        if (cfg.run_spectral) {
            ResultRow row = base_row(cfg, sweep_value, trial, seed, targets[i]);
            row.algorithm = "spectral";
            row.sigma_gap = gaps[i];
            row.runtime_s = spectral_time;
            row.speedup = 1.0;
            const int cluster = select_target(clustering, weights[i]);
            std::vector<int> est;
            for (std::size_t v = 0; v < clustering.assignment.size(); ++v)
                if (clustering.assignment[v] == cluster) est.push_back(static_cast<int>(v));
            row.error = estimation_error(est, truth_set);
            row.frac_error = static_cast<double>(row.error) / truth_set.size();
            rows.push_back(std::move(row));
        }
    }

    if (cfg.run_search && cfg.mode == BenchMode::Parallel) {
        std::vector<std::optional<double>> taus(targets.size(), tau);
        double batch_time = 0.0;
        std::vector<TargetOutcome> outcomes;
        std::string engine_error;
        try {
            const auto t0 = Clock::now();
            outcomes = parallel_search(graph, pt.k_alg, weights, taus, seed);
            batch_time = seconds_since(t0);
        } catch (const std::exception& e) {
            engine_error = e.what();
        }
        for (std::size_t i = 0; i < targets.size(); ++i) {
            const auto truth_set = truth.members(targets[i]);
            ResultRow row = base_row(cfg, sweep_value, trial, seed, targets[i]);
            row.algorithm = "search";
            row.sigma_gap = gaps[i];
            row.runtime_s = batch_time;
            const bool ok = engine_error.empty() && outcomes[i].estimate.has_value();
            if (ok) {
                auto nodes = union_sorted(outcomes[i].estimate->nodes, labels[i]);
                row.error = estimation_error(nodes, truth_set);
            } else {
                row.error = static_cast<long long>(truth_set.size());
                row.failed = true;
            }
            row.frac_error = static_cast<double>(row.error) / truth_set.size();
            if (cfg.run_spectral && !row.failed && batch_time > 0.0)
                row.speedup = spectral_time / batch_time;
            rows.push_back(std::move(row));
        }
    }
}

void run_polblogs_trial(const ExperimentConfig& cfg, const PolblogsData& data, int m,
                        double sweep_value, int trial, std::uint64_t seed,
                        std::vector<ResultRow>& rows) {
    const Graph& graph = data.graph;
    const GroundTruth& truth = data.truth;
    const std::optional<double> tau =
        cfg.tau_policy == TauPolicy::Fixed ? std::optional<double>(cfg.tau_value) : std::nullopt;

    std::array<std::vector<int>, 2> labels;
    std::vector<Eigen::VectorXd> weights(2);
    for (int c = 0; c < 2; ++c) {
        labels[c] = sample_labeled(truth.members(c), m,
                                   trial_seed(seed, 0xBEEF, static_cast<std::uint64_t>(c)));
        LabeledSet set{labels[c], c};
        weights[c] = labeled_weights(graph, set, cfg.labeled_r).w;
    }

    if (cfg.run_search) {
        double batch_time = 0.0;
        std::vector<TargetOutcome> outcomes;
        std::string engine_error;
        try {
            const auto t0 = Clock::now();
            outcomes = parallel_search(graph, 2, weights, {tau, tau}, seed);
            batch_time = seconds_since(t0);
        } catch (const std::exception& e) {
            engine_error = e.what();
        }
        const bool ok = engine_error.empty() && outcomes[0].estimate && outcomes[1].estimate;

        long long error = 0;
        if (ok) {
            // Two communities: assign each node to the larger membership
            // estimate, with labeled nodes pinned to their community; the
            // second estimated community is the complement of the first.
            const Eigen::VectorXd& mu0 = outcomes[0].estimate->mu_hat;
            const Eigen::VectorXd& mu1 = outcomes[1].estimate->mu_hat;
            std::vector<char> pinned(graph.num_nodes(), 0);
            std::vector<int> v0;
            for (int l : labels[0]) {
                pinned[l] = 1;
                v0.push_back(l);
            }
            for (int l : labels[1]) pinned[l] = 1;
            for (int j = 0; j < graph.num_nodes(); ++j)
                if (!pinned[j] && mu0[j] > mu1[j]) v0.push_back(j);
            std::sort(v0.begin(), v0.end());
            error = estimation_error(v0, truth.members(0));
        }
        for (int c = 0; c < 2; ++c) {
            // Empirical weight-bias gap for this target's weights.
            double mean[2] = {0.0, 0.0};
            for (int j = 0; j < graph.num_nodes(); ++j)
                mean[truth.assignment[j]] += weights[c][j];
            for (int i = 0; i < 2; ++i) mean[i] /= truth.members(i).size();

            ResultRow row = base_row(cfg, sweep_value, trial, seed, c);
            row.algorithm = "search";
            row.runtime_s = batch_time;
            row.sigma_gap = mean[c] - mean[1 - c];
            if (ok) {
                row.error = error;  // equal for both communities by complementarity
            } else {
                row.error = static_cast<long long>(truth.members(c).size());
                row.failed = true;
            }
            row.frac_error = static_cast<double>(row.error) / truth.members(c).size();
            rows.push_back(std::move(row));
        }
    }

    if (cfg.run_spectral) {
        const auto t0 = Clock::now();
        const Clustering clustering = spectral_cluster(graph, 2);
        const double spectral_time = seconds_since(t0);
        for (int c = 0; c < 2; ++c) {
            ResultRow row = base_row(cfg, sweep_value, trial, seed, c);
            row.algorithm = "spectral";
            row.runtime_s = spectral_time;
            row.speedup = 1.0;
            const int cluster = select_target(clustering, weights[c]);
            std::vector<int> est;
            for (std::size_t v = 0; v < clustering.assignment.size(); ++v)
                if (clustering.assignment[v] == cluster) est.push_back(static_cast<int>(v));
            row.error = estimation_error(est, truth.members(c));
            row.frac_error = static_cast<double>(row.error) / truth.members(c).size();
            rows.push_back(std::move(row));
        }
    }
}

}  // namespace

long long estimation_error(const std::vector<int>& estimate, const std::vector<int>& truth_set) {
    std::vector<int> diff;
    std::set_symmetric_difference(estimate.begin(), estimate.end(), truth_set.begin(),
                                  truth_set.end(), std::back_inserter(diff));
    return static_cast<long long>(diff.size());
}

double speedup(double t_ref, double t_alg) {
    if (!(t_ref > 0.0) || !(t_alg > 0.0)) throw ParameterError("runtimes must be positive");
    return t_ref / t_alg;
}

std::vector<double> ramp_alpha(int k, double alpha_min) {
    if (k < 1) throw ParameterError("k must be positive");
    if (!(alpha_min > 0.0) || alpha_min * k > 1.0 + 1e-12)
        throw ParameterError("alpha_min must be in (0, 1/k]");
    if (k == 1) return {1.0};
    const double delta = 2.0 * (1.0 - k * alpha_min) / (static_cast<double>(k) * (k - 1));
    std::vector<double> alpha(k);
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
        alpha[i] = alpha_min + i * delta;
        sum += alpha[i];
    }
    alpha[k - 1] += 1.0 - sum;  // absorb rounding
    return alpha;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t sweep_index,
                         std::uint64_t trial_index) {
    const std::uint64_t h = splitmix64(master + 0x9E3779B97F4A7C15ULL * (sweep_index + 1));
    return splitmix64(h + 0x9E3779B97F4A7C15ULL * (trial_index + 1));
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_string(buf.str());
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config JSON: ") + e.what(), 0);
    }

    ExperimentConfig cfg;
    cfg.experiment_id = j.value("experiment_id", cfg.experiment_id);

    const std::string mode = j.value("mode", "synthetic-weights");
    if (mode == "synthetic-weights") cfg.mode = BenchMode::SyntheticWeights;
    else if (mode == "labeled-nodes") cfg.mode = BenchMode::LabeledNodes;
    else if (mode == "parallel") cfg.mode = BenchMode::Parallel;
    else if (mode == "polblogs") cfg.mode = BenchMode::Polblogs;
    else throw ParameterError("unknown mode: " + mode);

    if (j.contains("sbm")) {
        const auto& s = j.at("sbm");
        cfg.sbm.n = s.value("n", 1000);
        cfg.sbm.k = s.value("k", 5);
        cfg.sbm.p = s.value("p", 0.25);
        cfg.sbm.q = s.value("q", 0.05);
        if (s.contains("alpha"))
            cfg.sbm.alpha = s.at("alpha").get<std::vector<double>>();
        else if (s.contains("alpha_min"))
            cfg.sbm.alpha = ramp_alpha(cfg.sbm.k, s.at("alpha_min").get<double>());
        else
            cfg.sbm.alpha.assign(cfg.sbm.k, 1.0 / cfg.sbm.k);
    } else if (cfg.mode != BenchMode::Polblogs) {
        throw ParameterError("config needs an 'sbm' block");
    }

    if (j.contains("weights")) {
        const auto& w = j.at("weights");
        cfg.w_lo = w.value("w_lo", cfg.w_lo);
        cfg.w_hi = w.value("w_hi", cfg.w_hi);
        cfg.rho = w.value("rho", cfg.rho);
    }
    // Radius defaults follow the experimental protocols: r=2 for the
    // labeled-node sweeps, r=1 for parallel clustering and the blog network.
    cfg.labeled_r = cfg.mode == BenchMode::LabeledNodes ? 2 : 1;
    if (j.contains("labeled")) {
        const auto& l = j.at("labeled");
        cfg.labeled_m = l.value("m", cfg.labeled_m);
        cfg.labeled_r = l.value("r", cfg.labeled_r);
    }

    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        cfg.sweep_name = s.value("name", "none");
        if (s.contains("values")) cfg.sweep_values = s.at("values").get<std::vector<double>>();
        cfg.sweep_fixes_p = s.value("fixed", "q") == std::string("p");
    }
    if (cfg.sweep_name == "none") cfg.sweep_values = {0.0};
    if (cfg.sweep_values.empty()) throw ParameterError("sweep grid must be nonempty");

    cfg.trials = j.value("trials", cfg.mode == BenchMode::Polblogs ? 50 : 20);
    if (cfg.trials < 1) throw ParameterError("trials must be at least 1");
    cfg.seed = j.value("seed", 0ULL);

    if (j.contains("algorithms")) {
        cfg.run_search = false;
        cfg.run_spectral = false;
        for (const auto& a : j.at("algorithms")) {
            if (a == "search") cfg.run_search = true;
            else if (a == "spectral") cfg.run_spectral = true;
            else throw ParameterError("unknown algorithm: " + a.get<std::string>());
        }
    }

    if (j.contains("tau")) {
        const auto& t = j.at("tau");
        const std::string policy = t.value("policy", "pq");
        if (policy == "pq") cfg.tau_policy = TauPolicy::HalfPQ;
        else if (policy == "auto") cfg.tau_policy = TauPolicy::Auto;
        else if (policy == "fixed") {
            cfg.tau_policy = TauPolicy::Fixed;
            cfg.tau_value = t.at("value").get<double>();
        } else throw ParameterError("unknown tau policy: " + policy);
    } else if (cfg.mode == BenchMode::Polblogs) {
        cfg.tau_policy = TauPolicy::Auto;  // p, q unknown on real data
    }

    if (j.contains("targets")) cfg.targets = j.at("targets").get<std::vector<int>>();
    cfg.search_k = j.value("search_k", 0);

    if (j.contains("dataset")) {
        cfg.dataset_edges = j.at("dataset").value("edges", "");
        cfg.dataset_labels = j.at("dataset").value("labels", "");
    }
    if (cfg.mode == BenchMode::Polblogs && (cfg.dataset_edges.empty() || cfg.dataset_labels.empty()))
        throw ParameterError("polblogs mode needs dataset.edges and dataset.labels");
    return cfg;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    std::vector<ResultRow> rows;

    if (cfg.mode == BenchMode::Polblogs) {
        const PolblogsData data = load_polblogs(cfg.dataset_edges, cfg.dataset_labels);
        for (std::size_t s = 0; s < cfg.sweep_values.size(); ++s) {
            const int m = cfg.sweep_name == "m"
                              ? static_cast<int>(std::lround(cfg.sweep_values[s]))
                              : cfg.labeled_m;
            for (int t = 0; t < cfg.trials; ++t)
                run_polblogs_trial(cfg, data, m, cfg.sweep_values[s], t,
                                   trial_seed(cfg.seed, s, t), rows);
        }
        return rows;
    }

    for (std::size_t s = 0; s < cfg.sweep_values.size(); ++s) {
        const SweepPoint pt = make_point(cfg, cfg.sweep_values[s]);
        pt.params.validate();
        for (int t = 0; t < cfg.trials; ++t)
            run_sbm_trial(cfg, pt, cfg.sweep_values[s], t, trial_seed(cfg.seed, s, t), rows);
    }
    return rows;
}

std::string csv_header() {
    return "experiment_id,algorithm,sweep_name,sweep_value,trial,seed,target,error,"
           "frac_error,runtime_s,speedup,sigma_gap,failed";
}

std::string to_csv_row(const ResultRow& row) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6);
    os << row.experiment_id << ',' << row.algorithm << ',' << row.sweep_name << ','
       << row.sweep_value << ',' << row.trial << ',' << row.seed << ',' << row.target << ','
       << row.error << ',' << row.frac_error << ',' << row.runtime_s << ',' << row.speedup
       << ',' << row.sigma_gap << ',' << (row.failed ? 1 : 0);
    return os.str();
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << csv_header() << "\n";
    for (const auto& row : rows) out << to_csv_row(row) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

PolblogsData load_polblogs(const std::string& edge_path, const std::string& label_path) {
    const EdgeListFile file = load_edge_list(edge_path);
    const std::vector<int> raw_labels = load_labels(label_path);

    PolblogsData data;
    data.dropped_self_loops = file.dropped_self_loops;

    const LccResult lcc = largest_connected_component(file.graph);
    data.graph = lcc.graph;
    data.truth.k = 2;
    data.truth.assignment.resize(lcc.new_to_old.size());
    for (std::size_t i = 0; i < lcc.new_to_old.size(); ++i) {
        const int old_id = lcc.new_to_old[i];
        if (old_id >= static_cast<int>(raw_labels.size()))
            throw ParameterError("label file does not cover node " + std::to_string(old_id));
        const int label = raw_labels[old_id];
        if (label != 0 && label != 1) throw ParameterError("labels must be binary");
        data.truth.assignment[i] = label;
    }
    data.truth.validate();
    data.community_sizes = data.truth.community_sizes();

    const auto sorted_sizes = [&] {
        auto s = data.community_sizes;
        std::sort(s.begin(), s.end());
        return s;
    }();
    data.size_warning = data.graph.num_nodes() != 1222 || data.graph.num_edges() != 16716 ||
                        sorted_sizes != std::vector<int>{586, 636};
    return data;
}

}  // namespace csearch
