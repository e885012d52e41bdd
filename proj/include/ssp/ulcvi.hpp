#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "ssp/learner.hpp"

namespace ssp {

/// Parameters of the optimistic/pessimistic finite-horizon learner. The
/// optimal-cost bound plays the role of B in every bonus formula; the
/// reduction passes 9 * b_star. bonus_scale multiplies both bonuses and
/// exists because the theoretical constants are far too conservative at
/// small scale; the formulas themselves are fixed.
struct UlcviParams {
    int horizon = 0;
    double delta = 0.0;               // in (0,1)
    Eigen::VectorXd terminal_costs;   // per state, zero at the goal
    double optimal_cost_bound = 0.0;  // > 0
    double bonus_scale = 1.0;         // >= 0
};

/// Logarithmic factor L_m = 3 ln(3 |S| |A| H m / delta); nondecreasing in m.
double ulcvi_log_factor(int num_states, int num_actions, int horizon, double delta,
                        long episode);

/// Cost bonus: sqrt(2 Var L / max(1,n)) + 5 L / max(1,n), scaled.
double cost_bonus(double visit_count, double cost_variance, double log_factor,
                  double bonus_scale);

/// Transition bonus:
///   sqrt(2 Var_p(J_lo) L / max(1,n))
///   + 62 H^3 |S| L / (B max(1,n))
///   + B / (16 H^2) * E_p[J_hi - J_lo],
/// scaled. `gap_expectation` is E_p[J_hi - J_lo] at the next level.
double transition_bonus(double visit_count, double value_variance, double gap_expectation,
                        int num_states, int horizon, double optimal_cost_bound,
                        double log_factor, double bonus_scale);

/// Empirical model frozen at the last replan. Rows with zero visits are
/// the self-loop row; visited rows are visit frequencies.
struct SnapshotModel {
    Eigen::ArrayXXd counts;                // n(s,a)
    std::vector<Eigen::MatrixXd> p_bar;    // per action: ns x ns
    Eigen::MatrixXd c_bar;                 // ns x na
    Eigen::MatrixXd cost_variance;         // population variance of observed costs
    int goal_state = 0;
};

struct OpviResult {
    Eigen::MatrixXd j_lo;    // optimistic values, (H+1) x ns; row H = terminal costs
    Eigen::MatrixXd j_hi;    // pessimistic values, same shape
    Eigen::MatrixXi policy;  // H x ns, greedy in the optimistic Q
};

/// One backward pass of optimistic-pessimistic value iteration on the
/// snapshot model. J_lo is clipped below at 0, J_hi above at H; the goal
/// row is pinned to its known absorbing dynamics and gets no bonus.
OpviResult opvi(const SnapshotModel& snapshot, const UlcviParams& params, long episode);

struct ReplanEvent {
    long episode = 0;
    std::string cause;   // "initial" or "visit-doubling"
    double max_gap = 0.0; // max over (h,s) of J_hi - J_lo
};

struct AdmissibilityProfile {
    int num_states = 0;
    int num_actions = 0;
    int horizon = 0;
    double delta = 0.0;
    double omega = 0.0; // H^4 B^-2 |S|

    /// Visit threshold below which a state-action pair counts as unknown
    /// in diagnostics: omega * ln(M H |S| |A| / delta).
    double known_threshold(long episodes) const;
};

AdmissibilityProfile admissibility_profile(const UlcviParams& params, int num_states,
                                           int num_actions);

/// Finite-horizon learner keeping doubled-count replanning, live and
/// snapshot counters, and coupled optimistic/pessimistic value tables.
class Ulcvi final : public FiniteHorizonLearner {
public:
    Ulcvi(const FhLearnerInit& init, double bonus_scale = 1.0);

    const Eigen::MatrixXi& begin_episode(int initial_state) override;
    void observe_step(int state, int action, double cost, int next_state) override;
    void end_episode(const Trajectory& trajectory) override;

    long episode() const { return episode_; }
    long replan_count() const { return replan_count_; }
    const OpviResult& plan() const { return plan_; }
    const SnapshotModel& snapshot() const { return snapshot_; }
    const UlcviParams& params() const { return params_; }
    const Eigen::ArrayXXd& live_counts() const { return live_count_; }
    double accumulated_cost(int state, int action) const { return cost_sum_(state, action); }

    void set_record_replans(bool on) { record_replans_ = on; }
    const std::vector<ReplanEvent>& replan_events() const { return replan_events_; }

private:
    void rebuild_snapshot();

    UlcviParams params_;
    int num_states_;
    int num_actions_;
    int goal_;

    Eigen::ArrayXXd live_count_;              // N(s,a)
    std::vector<Eigen::MatrixXd> live_trans_; // N(s,a,s') per action
    Eigen::ArrayXXd cost_sum_;                // accumulated cost C(s,a)
    Eigen::ArrayXXd cost_sum_sq_;

    SnapshotModel snapshot_;
    OpviResult plan_;

    bool planning_trigger_ = true;
    std::string trigger_cause_ = "initial";
    long episode_ = 0;
    long replan_count_ = 0;
    bool in_episode_ = false;

    bool record_replans_ = false;
    std::vector<ReplanEvent> replan_events_;
};

} // namespace ssp
