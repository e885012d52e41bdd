#include "ssp/finite_horizon.hpp"

#include <cmath>
#include <limits>

namespace ssp {

namespace {

int argmin_row(const Eigen::Ref<const Eigen::RowVectorXd>& q) {
    int best = 0;
    for (int a = 1; a < q.size(); ++a)
        if (q(a) < q(best)) best = a;
    return best;
}

void check_policy_shape(const FiniteHorizonMdp& fh, const FhPolicy& policy) {
    if (policy.rows() != fh.horizon || policy.cols() != fh.num_states)
        throw std::invalid_argument("finite-horizon policy must be H x num_states");
    if (policy.minCoeff() < 0 || policy.maxCoeff() >= fh.num_actions)
        throw std::invalid_argument("finite-horizon policy has an action out of range");
}

} // namespace

FiniteHorizonMdp build_finite_horizon(const SspMdp& ssp, double b_star, int horizon) {
    if (b_star < 0.0) throw std::invalid_argument("build_finite_horizon: b_star must be nonnegative");
    if (horizon < 1) throw std::invalid_argument("build_finite_horizon: horizon must be at least 1");

    const int S = ssp.num_states;
    FiniteHorizonMdp fh;
    fh.num_states = S + 1;
    fh.num_actions = ssp.num_actions;
    fh.horizon = horizon;
    fh.transitions.assign(fh.num_actions, Eigen::MatrixXd::Zero(S + 1, S + 1));
    for (int a = 0; a < fh.num_actions; ++a) {
        fh.transitions[a].topRows(S) = ssp.transitions[a];
        fh.transitions[a](S, S) = 1.0; // absorbing goal
    }
    fh.mean_costs = Eigen::MatrixXd::Zero(S + 1, fh.num_actions);
    fh.mean_costs.topRows(S) = ssp.mean_costs;
    fh.terminal_costs = Eigen::VectorXd::Constant(S + 1, 8.0 * b_star);
    fh.terminal_costs(S) = 0.0;
    return fh;
}

FhPlan fh_plan(const FiniteHorizonMdp& fh) {
    const int ns = fh.num_states;
    const int na = fh.num_actions;
    const int H = fh.horizon;

    FhPlan out;
    out.values.resize(H + 1, ns);
    out.values.row(H) = fh.terminal_costs.transpose();
    out.policy.resize(H, ns);

    Eigen::MatrixXd q(ns, na);
    for (int h = H - 1; h >= 0; --h) {
        const Eigen::VectorXd next = out.values.row(h + 1).transpose();
        for (int a = 0; a < na; ++a) q.col(a) = fh.mean_costs.col(a) + fh.transitions[a] * next;
        for (int s = 0; s < ns; ++s) {
            const int a = argmin_row(q.row(s));
            out.policy(h, s) = a;
            out.values(h, s) = q(s, a);
        }
    }
    return out;
}

Eigen::MatrixXd fh_optimal_values(const FiniteHorizonMdp& fh) { return fh_plan(fh).values; }

Eigen::MatrixXd fh_policy_values(const FiniteHorizonMdp& fh, const FhPolicy& policy) {
    check_policy_shape(fh, policy);
    const int ns = fh.num_states;
    const int H = fh.horizon;

    Eigen::MatrixXd values(H + 1, ns);
    values.row(H) = fh.terminal_costs.transpose();
    for (int h = H - 1; h >= 0; --h) {
        const Eigen::VectorXd next = values.row(h + 1).transpose();
        for (int s = 0; s < ns; ++s) {
            const int a = policy(h, s);
            values(h, s) = fh.mean_costs(s, a) + fh.transitions[a].row(s).dot(next);
        }
    }
    return values;
}

Eigen::VectorXd fh_brute_force_optimal(const FiniteHorizonMdp& fh) {
    const int ns = fh.num_states;
    const int na = fh.num_actions;
    const int H = fh.horizon;

    const int slots = H * ns;
    const double policy_count = std::pow(static_cast<double>(na), slots);
    if (policy_count > 1e6)
        throw TooLargeError("fh_brute_force_optimal: policy space exceeds 1e6");

    Eigen::VectorXd best = Eigen::VectorXd::Constant(ns, std::numeric_limits<double>::infinity());
    std::vector<int> digits(slots, 0);
    Eigen::MatrixXd dist(ns, ns); // row = start state
    Eigen::MatrixXd step(ns, ns);
    Eigen::VectorXd stage_cost(ns);

    for (;;) {
        // Exact expectation by forward propagation of the start-state rows.
        dist.setIdentity();
        Eigen::VectorXd total = Eigen::VectorXd::Zero(ns);
        for (int h = 0; h < H; ++h) {
            for (int s = 0; s < ns; ++s) {
                const int a = digits[h * ns + s];
                stage_cost(s) = fh.mean_costs(s, a);
                step.row(s) = fh.transitions[a].row(s);
            }
            total += dist * stage_cost;
            dist = dist * step;
        }
        total += dist * fh.terminal_costs;
        best = best.cwiseMin(total);

        int pos = 0;
        while (pos < slots && ++digits[pos] == na) digits[pos++] = 0;
        if (pos == slots) break;
    }
    return best;
}

Eigen::VectorXd fh_miss_probability(const FiniteHorizonMdp& fh, const FhPolicy& policy) {
    check_policy_shape(fh, policy);
    const int ns = fh.num_states;

    Eigen::MatrixXd dist = Eigen::MatrixXd::Identity(ns, ns);
    Eigen::MatrixXd step(ns, ns);
    for (int h = 0; h < fh.horizon; ++h) {
        for (int s = 0; s < ns; ++s) step.row(s) = fh.transitions[policy(h, s)].row(s);
        dist = dist * step;
    }
    return Eigen::VectorXd::Ones(ns) - dist.col(fh.goal_index());
}

FhPolicy repeat_policy(const Eigen::VectorXi& stationary, int horizon, int num_states) {
    if (stationary.size() != num_states && stationary.size() != num_states - 1)
        throw std::invalid_argument("repeat_policy: stationary policy has wrong size");
    FhPolicy out = FhPolicy::Zero(horizon, num_states);
    for (int h = 0; h < horizon; ++h)
        for (int s = 0; s < stationary.size(); ++s) out(h, s) = stationary(s);
    return out;
}

} // namespace ssp
