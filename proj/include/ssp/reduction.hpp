#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "ssp/learner.hpp"
#include "ssp/mdp.hpp"
#include "ssp/ulcvi.hpp"

namespace ssp {

struct ReductionConfig {
    long num_episodes = 0;  // K
    double delta = 0.1;
    double b_star = 0.0;
    double t_star = 0.0;
    long max_total_steps = 0;      // 0 -> 10*K*H + 1e6
    bool allow_zero_b_star = false;
    // Learner-specific knobs (e.g. the bonus scale) travel inside the
    // LearnerFactory; the reduction only owns the wiring above.

    long effective_max_steps(int horizon) const {
        return max_total_steps > 0 ? max_total_steps
                                   : 10 * num_episodes * static_cast<long>(horizon) + 1000000L;
    }
};

struct IntervalRecord {
    long episode = 0; // 0-based episode index
    int steps = 0;    // real (unpadded) steps
    bool reached_goal = false;
    double min_prior_visits = 0.0; // smallest visit count seen before a step of this interval
};

struct RunLog {
    std::vector<double> episode_costs;  // sampled step costs only; terminal costs excluded
    std::vector<long> episode_steps;
    std::vector<int> episode_intervals;
    std::vector<IntervalRecord> intervals;

    long total_intervals = 0; // M
    long total_steps = 0;
    long completed_episodes = 0;
    bool complete = true;

    std::uint64_t seed = 0;
    int horizon = 0;
    double learner_delta = 0.0;
    double wall_time_sec = 0.0;
};

/// Horizon of one interval: ceil(8 * t_star * ln(8K)), at least 1.
int compute_horizon(double t_star, long num_episodes);

/// Drives the SSP instance through H-step intervals fed to a
/// finite-horizon learner until each episode reaches the goal. The
/// learner is initialized on the goal-extended state space with horizon
/// compute_horizon(t_star, K), confidence delta/4, terminal costs
/// 8*b_star off the goal, and optimal-cost bound 9*b_star. A run that
/// exhausts max_total_steps is marked incomplete. When `learner_out` is
/// given it receives the learner for post-run inspection.
RunLog run_ssp_reduction(const SspMdp& mdp, const LearnerFactory& factory,
                         const ReductionConfig& cfg, RngStream& rng,
                         std::unique_ptr<FiniteHorizonLearner>* learner_out = nullptr);

struct IntervalDiagnostics {
    long total_intervals = 0; // M
    long num_episodes = 0;    // K
    double interval_bound = 0.0;
    bool within_bound = false;
    double known_threshold = 0.0;
    long bad_intervals = 0; // ended at neither the goal nor an unknown pair
};

/// Post-run diagnostic: evaluates the interval bound
/// 4K + 4e4 |S| |A| omega ln(K T |S| |A| omega / delta) and counts the
/// intervals that reached neither the goal nor a below-threshold pair.
IntervalDiagnostics interval_diagnostics(const RunLog& log, const AdmissibilityProfile& profile,
                                         const ReductionConfig& cfg);

} // namespace ssp
