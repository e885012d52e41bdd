#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "ssp/envs.hpp"
#include "ssp/harness.hpp"
#include "ssp/planning.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override,
            const std::string& seeds_override, bool diagnostics) {
    ssp::ExperimentConfig cfg = ssp::load_config(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;
    if (!seeds_override.empty()) {
        cfg.seeds.clear();
        std::stringstream ss(seeds_override);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.seeds.push_back(std::stoull(tok));
    }
    if (diagnostics) cfg.emit_diagnostics = true;

    const ssp::ExperimentSummary summary = ssp::run_experiment(cfg);
    std::cout << "episodes: " << summary.num_episodes << "\n"
              << "seeds: " << cfg.seeds.size() << " (incomplete: " << summary.incomplete_runs
              << ")\n"
              << "b_star: " << summary.b_star << "  t_star: " << summary.t_star
              << "  horizon: " << summary.horizon << "\n"
              << "final regret: " << summary.final_regret_mean << " +/- "
              << summary.final_regret_stderr << "\n";
    for (const auto& p : summary.artifacts) std::cout << "wrote " << p.string() << "\n";
    return 0;
}

int cmd_plan(const std::string& instance_path) {
    const ssp::SspMdp mdp = ssp::validate_mdp(ssp::load_instance(instance_path));
    const ssp::InstanceParameters p = ssp::instance_parameters(mdp);
    nlohmann::json j;
    j["b_star"] = p.b_star;
    j["t_star"] = p.t_star;
    j["diameter"] = p.diameter;
    j["j_opt_init"] = p.j_opt_init;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_gen(const std::string& name, const std::string& params_text, std::uint64_t seed,
            const std::string& out_path) {
    const nlohmann::json params =
        params_text.empty() ? nlohmann::json::object() : nlohmann::json::parse(params_text);
    const ssp::SspMdp mdp = ssp::make_instance(name, params, seed);
    ssp::save_instance(mdp, out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic-shortest-path learning experiments"};
    app.require_subcommand(1);

    std::string config_path, out_dir, seeds;
    bool diagnostics = false;
    auto* run = app.add_subcommand("run", "Run a seeded experiment sweep from a config file");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", out_dir, "Output directory override");
    run->add_option("--seeds", seeds, "Comma-separated seed list override");
    run->add_flag("--diagnostics", diagnostics, "Emit per-replan diagnostics");

    std::string instance_path;
    auto* plan = app.add_subcommand("plan", "Print exact instance parameters");
    plan->add_option("--instance", instance_path, "Instance file (JSON)")->required();

    std::string gen_name, gen_params = "{}", gen_out;
    std::uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("gen", "Generate an instance file");
    gen->add_option("--name", gen_name, "Generator: lower_bound | random | chain")->required();
    gen->add_option("--params", gen_params, "Generator parameters (JSON object)");
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--out", gen_out, "Output instance path")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, seeds, diagnostics);
        if (plan->parsed()) return cmd_plan(instance_path);
        if (gen->parsed()) return cmd_gen(gen_name, gen_params, gen_seed, gen_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
