#include "ssp/ulcvi.hpp"

#include <algorithm>
#include <cmath>

namespace ssp {

namespace {

int argmin_row(const Eigen::Ref<const Eigen::RowVectorXd>& q) {
    int best = 0;
    for (int a = 1; a < q.size(); ++a)
        if (q(a) < q(best)) best = a;
    return best;
}

void check_params(const UlcviParams& p, int num_states, int goal_state) {
    if (p.horizon < 1) throw std::invalid_argument("ulcvi: horizon must be at least 1");
    if (!(p.delta > 0.0 && p.delta < 1.0)) throw std::invalid_argument("ulcvi: delta must be in (0,1)");
    if (!(p.optimal_cost_bound > 0.0))
        throw std::invalid_argument("ulcvi: optimal cost bound must be positive");
    if (p.bonus_scale < 0.0) throw std::invalid_argument("ulcvi: bonus scale must be nonnegative");
    if (p.terminal_costs.size() != num_states)
        throw std::invalid_argument("ulcvi: terminal costs must have one entry per state");
    if (p.terminal_costs.minCoeff() < 0.0)
        throw std::invalid_argument("ulcvi: terminal costs must be nonnegative");
    if (p.terminal_costs(goal_state) != 0.0)
        throw std::invalid_argument("ulcvi: terminal cost at the goal must be zero");
}

} // namespace

double ulcvi_log_factor(int num_states, int num_actions, int horizon, double delta,
                        long episode) {
    return 3.0 * std::log(3.0 * num_states * num_actions * horizon *
                          static_cast<double>(episode) / delta);
}

double cost_bonus(double visit_count, double cost_variance, double log_factor,
                  double bonus_scale) {
    const double n = std::max(1.0, visit_count);
    return bonus_scale *
           (std::sqrt(2.0 * cost_variance * log_factor / n) + 5.0 * log_factor / n);
}

double transition_bonus(double visit_count, double value_variance, double gap_expectation,
                        int num_states, int horizon, double optimal_cost_bound,
                        double log_factor, double bonus_scale) {
    const double n = std::max(1.0, visit_count);
    const double h3 = static_cast<double>(horizon) * horizon * horizon;
    return bonus_scale *
           (std::sqrt(2.0 * value_variance * log_factor / n) +
            62.0 * h3 * num_states * log_factor / (optimal_cost_bound * n) +
            optimal_cost_bound / (16.0 * horizon * horizon) * gap_expectation);
}

OpviResult opvi(const SnapshotModel& snapshot, const UlcviParams& params, long episode) {
    const int ns = static_cast<int>(snapshot.counts.rows());
    const int na = static_cast<int>(snapshot.counts.cols());
    const int H = params.horizon;
    const int g = snapshot.goal_state;
    const double L = ulcvi_log_factor(ns, na, H, params.delta, episode);

    OpviResult out;
    out.j_lo.resize(H + 1, ns);
    out.j_hi.resize(H + 1, ns);
    out.j_lo.row(H) = params.terminal_costs.transpose();
    out.j_hi.row(H) = params.terminal_costs.transpose();
    out.policy = Eigen::MatrixXi::Zero(H, ns);

    Eigen::MatrixXd e_lo(ns, na), e_hi(ns, na), var(ns, na);
    Eigen::MatrixXd q_lo(ns, na), q_hi(ns, na);

    for (int h = H - 1; h >= 0; --h) {
        const Eigen::VectorXd next_lo = out.j_lo.row(h + 1).transpose();
        const Eigen::VectorXd next_hi = out.j_hi.row(h + 1).transpose();
        const Eigen::VectorXd next_lo_sq = next_lo.array().square().matrix();
        for (int a = 0; a < na; ++a) {
            e_lo.col(a) = snapshot.p_bar[a] * next_lo;
            e_hi.col(a) = snapshot.p_bar[a] * next_hi;
            var.col(a) = (snapshot.p_bar[a] * next_lo_sq - e_lo.col(a).cwiseProduct(e_lo.col(a)))
                             .cwiseMax(0.0);
        }
        for (int s = 0; s < ns; ++s) {
            if (s == g) continue;
            for (int a = 0; a < na; ++a) {
                const double b =
                    cost_bonus(snapshot.counts(s, a), snapshot.cost_variance(s, a), L,
                               params.bonus_scale) +
                    transition_bonus(snapshot.counts(s, a), var(s, a), e_hi(s, a) - e_lo(s, a),
                                     ns, H, params.optimal_cost_bound, L, params.bonus_scale);
                q_lo(s, a) = snapshot.c_bar(s, a) - b + e_lo(s, a);
                q_hi(s, a) = snapshot.c_bar(s, a) + b + e_hi(s, a);
            }
            const int a = argmin_row(q_lo.row(s));
            out.policy(h, s) = a;
            out.j_lo(h, s) = std::max(q_lo(s, a), 0.0);
            out.j_hi(h, s) = std::min(q_hi(s, a), static_cast<double>(H));
        }
        // Goal dynamics are part of the model definition, not learned:
        // zero cost, self-loop, no bonus.
        out.j_lo(h, g) = out.j_lo(h + 1, g);
        out.j_hi(h, g) = out.j_hi(h + 1, g);
        out.policy(h, g) = 0;
    }
    return out;
}

double AdmissibilityProfile::known_threshold(long episodes) const {
    return omega * std::log(static_cast<double>(episodes) * horizon * num_states *
                            num_actions / delta);
}

AdmissibilityProfile admissibility_profile(const UlcviParams& params, int num_states,
                                           int num_actions) {
    AdmissibilityProfile out;
    out.num_states = num_states;
    out.num_actions = num_actions;
    out.horizon = params.horizon;
    out.delta = params.delta;
    const double h4 = std::pow(static_cast<double>(params.horizon), 4);
    out.omega = h4 * num_states / (params.optimal_cost_bound * params.optimal_cost_bound);
    return out;
}

Ulcvi::Ulcvi(const FhLearnerInit& init, double bonus_scale)
    : params_{init.horizon, init.delta, init.terminal_costs, init.optimal_cost_bound,
              bonus_scale},
      num_states_(init.num_states),
      num_actions_(init.num_actions),
      goal_(init.goal_state) {
    if (num_states_ < 2 || num_actions_ < 1)
        throw std::invalid_argument("ulcvi: need at least one interior state and one action");
    if (goal_ < 0 || goal_ >= num_states_)
        throw std::invalid_argument("ulcvi: goal state out of range");
    check_params(params_, num_states_, goal_);

    live_count_ = Eigen::ArrayXXd::Zero(num_states_, num_actions_);
    live_trans_.assign(num_actions_, Eigen::MatrixXd::Zero(num_states_, num_states_));
    cost_sum_ = Eigen::ArrayXXd::Zero(num_states_, num_actions_);
    cost_sum_sq_ = Eigen::ArrayXXd::Zero(num_states_, num_actions_);

    snapshot_.goal_state = goal_;
    rebuild_snapshot();
    // Placeholder tables so accessors are valid before the first episode;
    // the first begin_episode replans (trigger starts true).
    plan_ = opvi(snapshot_, params_, 1);
}

void Ulcvi::rebuild_snapshot() {
    snapshot_.counts = live_count_;
    snapshot_.p_bar.assign(num_actions_,
                           Eigen::MatrixXd::Identity(num_states_, num_states_));
    snapshot_.c_bar = Eigen::MatrixXd::Zero(num_states_, num_actions_);
    snapshot_.cost_variance = Eigen::MatrixXd::Zero(num_states_, num_actions_);
    for (int s = 0; s < num_states_; ++s) {
        for (int a = 0; a < num_actions_; ++a) {
            const double n = snapshot_.counts(s, a);
            if (n <= 0.0) continue; // unvisited rows stay at the self-loop
            snapshot_.p_bar[a].row(s) = live_trans_[a].row(s) / n;
            const double mean = cost_sum_(s, a) / n;
            snapshot_.c_bar(s, a) = mean;
            snapshot_.cost_variance(s, a) =
                std::max(0.0, cost_sum_sq_(s, a) / n - mean * mean);
        }
    }
}

const Eigen::MatrixXi& Ulcvi::begin_episode(int initial_state) {
    if (in_episode_) throw std::logic_error("ulcvi: begin_episode while an episode is active");
    if (initial_state < 0 || initial_state >= num_states_)
        throw std::out_of_range("ulcvi: initial state out of range");

    ++episode_;
    if (planning_trigger_) {
        rebuild_snapshot();
        plan_ = opvi(snapshot_, params_, episode_);
        ++replan_count_;
        if (record_replans_) {
            const double gap = (plan_.j_hi - plan_.j_lo).maxCoeff();
            replan_events_.push_back({episode_, trigger_cause_, gap});
        }
        planning_trigger_ = false;
        trigger_cause_ = "visit-doubling";
    }
    in_episode_ = true;
    return plan_.policy;
}

void Ulcvi::observe_step(int state, int action, double cost, int next_state) {
    if (!in_episode_) throw std::logic_error("ulcvi: observe_step outside an episode");
    if (state < 0 || state >= num_states_ || action < 0 || action >= num_actions_ ||
        next_state < 0 || next_state >= num_states_)
        throw std::out_of_range("ulcvi: step indices out of range");
    if (!(cost >= 0.0 && cost <= 1.0))
        throw std::invalid_argument("ulcvi: step cost outside [0,1]");
    if (state == goal_) return; // absorbing dynamics are known, not learned

    live_count_(state, action) += 1.0;
    live_trans_[action](state, next_state) += 1.0;
    cost_sum_(state, action) += cost;
    cost_sum_sq_(state, action) += cost * cost;

    if (live_count_(state, action) >= 2.0 * snapshot_.counts(state, action))
        planning_trigger_ = true;
}

void Ulcvi::end_episode(const Trajectory& trajectory) {
    if (!in_episode_) throw std::logic_error("ulcvi: end_episode without begin_episode");
    const int H = params_.horizon;
    if (static_cast<int>(trajectory.actions.size()) != H ||
        static_cast<int>(trajectory.costs.size()) != H ||
        static_cast<int>(trajectory.states.size()) != H + 1)
        throw LengthMismatchError("ulcvi: trajectory not padded to the horizon");
    in_episode_ = false;
}

} // namespace ssp
