#include "ssp/reduction.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace ssp {

int compute_horizon(double t_star, long num_episodes) {
    if (!(t_star > 0.0)) throw std::invalid_argument("compute_horizon: t_star must be positive");
    if (num_episodes < 1) throw std::invalid_argument("compute_horizon: need at least one episode");
    const double h = std::ceil(8.0 * t_star * std::log(8.0 * static_cast<double>(num_episodes)));
    return std::max(1, static_cast<int>(h));
}

RunLog run_ssp_reduction(const SspMdp& mdp, const LearnerFactory& factory,
                         const ReductionConfig& cfg, RngStream& rng,
                         std::unique_ptr<FiniteHorizonLearner>* learner_out) {
    if (cfg.num_episodes < 1) throw std::invalid_argument("reduction: K must be at least 1");
    if (!(cfg.delta > 0.0 && cfg.delta < 1.0))
        throw std::invalid_argument("reduction: delta must be in (0,1)");
    if (cfg.b_star < 0.0 || (cfg.b_star == 0.0 && !cfg.allow_zero_b_star))
        throw std::invalid_argument(
            "reduction: b_star must be positive (or zero with allow_zero_b_star set)");
    if (!(cfg.t_star >= cfg.b_star))
        throw std::invalid_argument("reduction: t_star must be at least b_star");

    const int S = mdp.num_states;
    const int A = mdp.num_actions;
    const int goal = S;
    const int H = compute_horizon(cfg.t_star, cfg.num_episodes);
    const long max_steps = cfg.effective_max_steps(H);

    FhLearnerInit init;
    init.num_states = S + 1;
    init.num_actions = A;
    init.goal_state = goal;
    init.horizon = H;
    init.delta = cfg.delta / 4.0;
    init.terminal_costs = Eigen::VectorXd::Constant(S + 1, 8.0 * cfg.b_star);
    init.terminal_costs(goal) = 0.0;
    // The learner requires a positive bound; a zero-cost instance still
    // admits any positive value as a valid upper bound.
    init.optimal_cost_bound = std::max(9.0 * cfg.b_star, 1e-6);

    auto learner = factory(init);

    RunLog log;
    log.seed = rng.seed();
    log.horizon = H;
    log.learner_delta = init.delta;

    Eigen::ArrayXXd visits = Eigen::ArrayXXd::Zero(S, A);
    Trajectory traj;
    traj.states.resize(H + 1);
    traj.actions.resize(H);
    traj.costs.resize(H);

    const auto t0 = std::chrono::steady_clock::now();

    for (long k = 0; k < cfg.num_episodes; ++k) {
        int s = sample_initial_state(mdp, rng);
        double episode_cost = 0.0;
        long episode_steps = 0;
        int episode_intervals = 0;

        while (s != goal) {
            if (log.total_steps >= max_steps) {
                log.complete = false;
                break;
            }
            ++log.total_intervals;
            const Eigen::MatrixXi& policy = learner->begin_episode(s);

            traj.interval_index = log.total_intervals;
            traj.goal_step.reset();
            traj.padded = false;
            traj.states[0] = s;
            double min_prior = std::numeric_limits<double>::infinity();
            int real_steps = 0;

            for (int h = 0; h < H; ++h) {
                const int a = policy(h, s);
                const double c = sample_cost(mdp, s, a, rng);
                const int next = sample_transition(mdp, s, a, rng);
                learner->observe_step(s, a, c, next);

                min_prior = std::min(min_prior, visits(s, a));
                visits(s, a) += 1.0;

                traj.actions[h] = a;
                traj.costs[h] = c;
                traj.states[h + 1] = next;
                episode_cost += c;
                ++episode_steps;
                ++log.total_steps;
                ++real_steps;
                s = next;

                if (s == goal) {
                    traj.goal_step = h + 1;
                    for (int j = h + 1; j < H; ++j) {
                        traj.actions[j] = 0;
                        traj.costs[j] = 0.0;
                        traj.states[j + 1] = goal;
                        traj.padded = true;
                    }
                    break;
                }
            }
            learner->end_episode(traj);

            log.intervals.push_back({k, real_steps, traj.goal_step.has_value(), min_prior});
            ++episode_intervals;
        }

        if (!log.complete) break;
        log.episode_costs.push_back(episode_cost);
        log.episode_steps.push_back(episode_steps);
        log.episode_intervals.push_back(episode_intervals);
        ++log.completed_episodes;
    }

    log.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (learner_out) *learner_out = std::move(learner);
    return log;
}

IntervalDiagnostics interval_diagnostics(const RunLog& log, const AdmissibilityProfile& profile,
                                         const ReductionConfig& cfg) {
    IntervalDiagnostics out;
    out.total_intervals = log.total_intervals;
    out.num_episodes = cfg.num_episodes;

    const double sa = static_cast<double>(profile.num_states) * profile.num_actions;
    out.interval_bound =
        4.0 * static_cast<double>(cfg.num_episodes) +
        4e4 * sa * profile.omega *
            std::log(static_cast<double>(cfg.num_episodes) * cfg.t_star * sa * profile.omega /
                     cfg.delta);
    out.within_bound = static_cast<double>(out.total_intervals) <= out.interval_bound;

    out.known_threshold = profile.known_threshold(std::max(1L, log.total_intervals));
    for (const auto& rec : log.intervals)
        if (!rec.reached_goal && rec.min_prior_visits >= out.known_threshold) ++out.bad_intervals;
    return out;
}

} // namespace ssp
