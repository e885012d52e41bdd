#include "ssp/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "ssp/envs.hpp"

namespace ssp {

namespace {

using nlohmann::json;

// Fixed-format doubles keep artifacts byte-stable.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

SspMdp build_instance(const ExperimentConfig& cfg, std::uint64_t seed) {
    if (!cfg.instance_path.empty()) return validate_mdp(load_instance(cfg.instance_path));
    return make_instance(cfg.generator, cfg.generator_params, seed);
}

LearnerFactory build_factory(const ExperimentConfig& cfg, std::uint64_t seed) {
    if (cfg.learner == "ulcvi") {
        const double scale = cfg.bonus_scale;
        const bool record = cfg.emit_diagnostics;
        return [scale, record](const FhLearnerInit& init) {
            auto learner = std::make_unique<Ulcvi>(init, scale);
            learner->set_record_replans(record);
            return learner;
        };
    }
    if (cfg.learner == "uniform_random") {
        RngStream rng(seed, "learner");
        return [rng](const FhLearnerInit& init) {
            return std::make_unique<RandomPolicyLearner>(init, rng);
        };
    }
    throw ConfigError("unknown learner: " + cfg.learner);
}

void write_seed_csv(const std::filesystem::path& path, const SeedResult& run) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "episode,steps,intervals,episode_cost,cum_cost,cum_regret\n";
    double cum_cost = 0.0;
    for (long k = 0; k < run.log.completed_episodes; ++k) {
        cum_cost += run.log.episode_costs[k];
        out << (k + 1) << ',' << run.log.episode_steps[k] << ',' << run.log.episode_intervals[k]
            << ',' << fmt(run.log.episode_costs[k]) << ',' << fmt(cum_cost) << ','
            << fmt(run.regret_curve(k)) << '\n';
    }
}

void write_diagnostics(const std::filesystem::path& path,
                       const std::vector<ReplanEvent>& events) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& e : events) {
        json j;
        j["m"] = e.episode;
        j["cause"] = e.cause;
        j["max_gap"] = e.max_gap;
        out << j.dump() << '\n';
    }
}

} // namespace

ExperimentConfig parse_config(const json& j) {
    ExperimentConfig cfg;
    const auto& inst = j.at("instance");
    if (inst.contains("path")) {
        cfg.instance_path = inst.at("path").get<std::string>();
    } else if (inst.contains("generator")) {
        cfg.generator = inst.at("generator").get<std::string>();
        cfg.generator_params = inst.value("params", json::object());
    } else {
        throw ConfigError("config: instance needs either a path or a generator");
    }

    if (j.contains("algorithm")) {
        const auto& alg = j.at("algorithm");
        cfg.learner = alg.value("learner", std::string("ulcvi"));
        cfg.delta = alg.value("delta", 0.1);
        cfg.bonus_scale = alg.value("bonus_scale", 1.0);
        auto bound = [&](const char* key) -> std::optional<double> {
            if (!alg.contains(key) || (alg.at(key).is_string() && alg.at(key) == "auto"))
                return std::nullopt;
            return alg.at(key).get<double>();
        };
        cfg.b_star_override = bound("b_star");
        cfg.t_star_override = bound("t_star");
    }

    cfg.num_episodes = j.at("k").get<long>();
    for (const auto& s : j.at("seeds")) cfg.seeds.push_back(s.get<std::uint64_t>());
    cfg.out_dir = j.value("out_dir", std::string("out"));
    if (j.contains("emit")) {
        cfg.emit_regret_curve = j.at("emit").value("regret_curve", true);
        cfg.emit_diagnostics = j.at("emit").value("diagnostics", false);
    }
    cfg.max_total_steps = j.value("max_total_steps", 0L);

    if (cfg.seeds.empty()) throw ConfigError("config: seeds must be nonempty");
    if (cfg.num_episodes < 1) throw ConfigError("config: k must be at least 1");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json j;
    in >> j;
    return parse_config(j);
}

Eigen::VectorXd compute_regret(const RunLog& log, double baseline_per_episode) {
    Eigen::VectorXd curve(log.completed_episodes);
    double cum = 0.0;
    for (long k = 0; k < log.completed_episodes; ++k) {
        cum += log.episode_costs[k];
        curve(k) = cum - static_cast<double>(k + 1) * baseline_per_episode;
    }
    return curve;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);

    ExperimentSummary summary;
    summary.num_episodes = cfg.num_episodes;

    for (const std::uint64_t seed : cfg.seeds) {
        const SspMdp mdp = build_instance(cfg, seed);
        const InstanceParameters params = instance_parameters(mdp);

        ReductionConfig rcfg;
        rcfg.num_episodes = cfg.num_episodes;
        rcfg.delta = cfg.delta;
        rcfg.b_star = cfg.b_star_override.value_or(params.b_star);
        rcfg.t_star = cfg.t_star_override.value_or(params.t_star);
        rcfg.max_total_steps = cfg.max_total_steps;
        rcfg.allow_zero_b_star = rcfg.b_star == 0.0;

        RngStream env_rng(seed, "env");
        std::unique_ptr<FiniteHorizonLearner> learner;
        SeedResult run;
        run.seed = seed;
        run.log = run_ssp_reduction(mdp, build_factory(cfg, seed), rcfg, env_rng, &learner);
        run.baseline_per_episode = params.j_opt_init;
        run.regret_curve = compute_regret(run.log, run.baseline_per_episode);
        run.final_regret = run.log.complete && run.log.completed_episodes > 0
                               ? run.regret_curve(run.log.completed_episodes - 1)
                               : std::numeric_limits<double>::infinity();

        summary.b_star = rcfg.b_star;
        summary.t_star = rcfg.t_star;
        summary.horizon = run.log.horizon;
        summary.baseline_per_episode = run.baseline_per_episode;

        const fs::path csv = fs::path(cfg.out_dir) / ("seed_" + std::to_string(seed) + ".csv");
        write_seed_csv(csv, run);
        summary.artifacts.push_back(csv);

        if (cfg.emit_diagnostics) {
            if (auto* u = dynamic_cast<Ulcvi*>(learner.get())) {
                const fs::path diag =
                    fs::path(cfg.out_dir) / ("diag_seed_" + std::to_string(seed) + ".jsonl");
                write_diagnostics(diag, u->replan_events());
                summary.artifacts.push_back(diag);
            }
        }
        summary.runs.push_back(std::move(run));
    }

    // Aggregates over complete runs; incomplete ones are only counted.
    double mean = 0.0, m2 = 0.0, intervals = 0.0;
    long n = 0;
    for (const auto& run : summary.runs) {
        if (!run.log.complete) {
            ++summary.incomplete_runs;
            continue;
        }
        ++n;
        const double d = run.final_regret - mean;
        mean += d / n;
        m2 += d * (run.final_regret - mean);
        intervals += static_cast<double>(run.log.total_intervals);
        if (summary.mean_regret_curve.size() == 0)
            summary.mean_regret_curve = run.regret_curve;
        else
            summary.mean_regret_curve += run.regret_curve;
    }
    if (n > 0) {
        summary.final_regret_mean = mean;
        summary.final_regret_stderr = n > 1 ? std::sqrt(m2 / (n - 1)) / std::sqrt(n) : 0.0;
        summary.m_intervals_mean = intervals / n;
        summary.mean_regret_curve /= static_cast<double>(n);
    }

    json js;
    js["k"] = summary.num_episodes;
    js["b_star"] = summary.b_star;
    js["t_star"] = summary.t_star;
    js["horizon"] = summary.horizon;
    js["m_intervals"] = summary.m_intervals_mean;
    js["final_regret_mean"] = summary.final_regret_mean;
    js["final_regret_stderr"] = summary.final_regret_stderr;
    js["incomplete_runs"] = summary.incomplete_runs;
    js["baseline_per_episode"] = summary.baseline_per_episode;
    js["seeds"] = cfg.seeds;
    js["config"] = {{"learner", cfg.learner},
                    {"delta", cfg.delta},
                    {"bonus_scale", cfg.bonus_scale},
                    {"instance", cfg.instance_path.empty() ? cfg.generator : cfg.instance_path}};

    const std::filesystem::path summary_path = std::filesystem::path(cfg.out_dir) / "summary.json";
    {
        std::ofstream out(summary_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + summary_path.string());
        out << js.dump(2) << '\n';
    }
    summary.artifacts.push_back(summary_path);

    if (cfg.emit_regret_curve) {
        const std::filesystem::path points = std::filesystem::path(cfg.out_dir) / "points.csv";
        const std::filesystem::path curves = std::filesystem::path(cfg.out_dir) / "curves.csv";
        std::ofstream pout(points, std::ios::binary), cout_(curves, std::ios::binary);
        emit_plot_data({summary}, pout, cout_);
        summary.artifacts.push_back(points);
        summary.artifacts.push_back(curves);
    }
    return summary;
}

void emit_plot_data(const std::vector<ExperimentSummary>& summaries, std::ostream& points_csv,
                    std::ostream& curves_csv) {
    if (summaries.empty()) throw std::invalid_argument("emit_plot_data: need at least one summary");
    points_csv << "k,final_regret_mean,final_regret_stderr\n";
    for (const auto& s : summaries)
        points_csv << s.num_episodes << ',' << fmt(s.final_regret_mean) << ','
                   << fmt(s.final_regret_stderr) << '\n';

    curves_csv << "k,episode,mean_cum_regret\n";
    for (const auto& s : summaries)
        for (Eigen::Index k = 0; k < s.mean_regret_curve.size(); ++k)
            curves_csv << s.num_episodes << ',' << (k + 1) << ','
                       << fmt(s.mean_regret_curve(k)) << '\n';
}

} // namespace ssp
