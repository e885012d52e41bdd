#pragma once

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ssp/planning.hpp"
#include "ssp/reduction.hpp"

namespace ssp {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Experiment description. Either `instance_path` or `generator` must be
/// set. Empty b/t overrides mean "auto": compute the exact parameters by
/// planning.
struct ExperimentConfig {
    std::string instance_path;
    std::string generator;
    nlohmann::json generator_params = nlohmann::json::object();

    std::string learner = "ulcvi"; // or "uniform_random"
    double delta = 0.1;
    double bonus_scale = 1.0;
    std::optional<double> b_star_override;
    std::optional<double> t_star_override;

    long num_episodes = 0; // K
    std::vector<std::uint64_t> seeds;
    std::string out_dir;
    bool emit_regret_curve = true;
    bool emit_diagnostics = false;
    long max_total_steps = 0;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

struct SeedResult {
    std::uint64_t seed = 0;
    RunLog log;
    Eigen::VectorXd regret_curve; // over completed episodes
    double final_regret = 0.0;
    double baseline_per_episode = 0.0;
};

struct ExperimentSummary {
    long num_episodes = 0;
    double b_star = 0.0;
    double t_star = 0.0;
    int horizon = 0;
    double m_intervals_mean = 0.0;
    double final_regret_mean = 0.0;
    double final_regret_stderr = 0.0;
    int incomplete_runs = 0;
    double baseline_per_episode = 0.0;

    Eigen::VectorXd mean_regret_curve; // across complete seeds
    std::vector<SeedResult> runs;
    std::vector<std::filesystem::path> artifacts;
};

/// Runs the seeded sweep, writes one CSV per seed
/// (episode,steps,intervals,episode_cost,cum_cost,cum_regret), a summary
/// JSON, optionally the mean regret curve and per-replan diagnostics.
/// Artifacts are byte-identical across repeated invocations.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

/// Cumulative regret curve: R_k = sum_{j<=k} cost_j - k * baseline.
Eigen::VectorXd compute_regret(const RunLog& log, double baseline_per_episode);

/// Plot-ready CSVs: one row per summary (k,final_regret_mean,stderr) and
/// the long-format mean curves (k,episode,mean_cum_regret).
void emit_plot_data(const std::vector<ExperimentSummary>& summaries, std::ostream& points_csv,
                    std::ostream& curves_csv);

} // namespace ssp
