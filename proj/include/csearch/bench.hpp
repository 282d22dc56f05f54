#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csearch/graph.hpp"
#include "csearch/search.hpp"

namespace csearch {

enum class BenchMode { SyntheticWeights, LabeledNodes, Parallel, Polblogs };

enum class TauPolicy { HalfPQ, Auto, Fixed };

/// One experiment: a sweep grid times a trial count, run for one or both
/// algorithms, emitted as CSV rows. Parsed from JSON (see README for the
/// schema); every field has a flag mirror on the CLI.
struct ExperimentConfig {
    std::string experiment_id = "experiment";
    BenchMode mode = BenchMode::SyntheticWeights;

    SbmParams sbm;

    // Synthetic-weight protocol.
    double w_lo = 5.0, w_hi = 10.0, rho = 0.8;

    // Labeled-node protocol.
    int labeled_m = 10;
    int labeled_r = 2;

    // Sweep axis: "p_minus_q", "m", "sigma_gap", "k", or "none".
    std::string sweep_name = "none";
    std::vector<double> sweep_values;
    bool sweep_fixes_p = false;  // p_minus_q sweep: hold p and move q instead

    int trials = 20;
    std::uint64_t seed = 0;
    bool run_search = true;
    bool run_spectral = false;

    TauPolicy tau_policy = TauPolicy::HalfPQ;
    double tau_value = 0.0;

    std::vector<int> targets;  // empty = all communities
    int search_k = 0;          // 0 = model k (k sweeps override per point)

    std::string dataset_edges;  // polblogs mode
    std::string dataset_labels;

    static ExperimentConfig from_json_file(const std::string& path);
    static ExperimentConfig from_json_string(const std::string& text);
};

struct ResultRow {
    std::string experiment_id;
    std::string algorithm;  // "search" or "spectral"
    std::string sweep_name;
    double sweep_value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    int target = 0;
    long long error = 0;
    double frac_error = 0.0;
    double runtime_s = 0.0;
    double speedup = 0.0;  // reference runtime / own runtime; 0 without a reference
    double sigma_gap = 0.0;
    bool failed = false;
};

/// Size of the symmetric difference between the estimated and true node set.
long long estimation_error(const std::vector<int>& estimate, const std::vector<int>& truth_set);

/// t_ref / t_alg; > 1 means the measured algorithm is faster.
double speedup(double t_ref, double t_alg);

/// Linear ramp of community fractions starting at alpha_min and summing to 1.
std::vector<double> ramp_alpha(int k, double alpha_min);

/// Documented seed-splitting rule for independent trials:
/// splitmix64 applied to master and the sweep/trial indices.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t sweep_index,
                         std::uint64_t trial_index);

/// Executes the config and returns one row per (sweep value, trial, target,
/// algorithm). Per-trial algorithm failures become rows with
/// error = |V_target| and the failed flag, never process aborts. Wall time
/// covers the algorithm core only.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

/// Fixed CSV schema; all floating-point fields use 6 decimals.
std::string csv_header();
std::string to_csv_row(const ResultRow& row);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

struct PolblogsData {
    Graph graph;
    GroundTruth truth;
    long dropped_self_loops = 0;
    bool size_warning = false;  // counts differ from the published 1222/16716/{586,636}
    std::vector<int> community_sizes;
};

/// Loads the political-blogs edge and label files, simplifies to an
/// undirected graph and keeps the largest connected component. Unexpected
/// counts set size_warning instead of failing.
PolblogsData load_polblogs(const std::string& edge_path, const std::string& label_path);

}  // namespace csearch
