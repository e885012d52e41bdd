#include "ssp/planning.hpp"

#include <cmath>

namespace ssp {

namespace {

constexpr double kDivergenceCap = 1e9;

int argmin_row(const Eigen::Ref<const Eigen::RowVectorXd>& q) {
    int best = 0;
    for (int a = 1; a < q.size(); ++a)
        if (q(a) < q(best)) best = a;
    return best;
}

} // namespace

PlanResult ssp_optimal_values(const SspMdp& mdp,
                              const std::optional<Eigen::MatrixXd>& cost_override,
                              double tol, long max_iter) {
    if (tol <= 0.0) throw std::invalid_argument("ssp_optimal_values: tol must be positive");
    const int S = mdp.num_states;
    const int A = mdp.num_actions;

    const Eigen::MatrixXd& costs = cost_override ? *cost_override : mdp.mean_costs;
    if (costs.rows() != S || costs.cols() != A)
        throw std::invalid_argument("ssp_optimal_values: cost override has wrong shape");
    if (cost_override && costs.minCoeff() < 0.0)
        throw std::invalid_argument("ssp_optimal_values: cost override must be nonnegative");

    // Interior blocks; the goal column contributes nothing since J(g) = 0.
    std::vector<Eigen::MatrixXd> inner(A);
    for (int a = 0; a < A; ++a) inner[a] = mdp.transitions[a].leftCols(S);

    Eigen::VectorXd j = Eigen::VectorXd::Zero(S);
    Eigen::VectorXd j_next(S);
    Eigen::MatrixXd q(S, A);
    StationaryPolicy policy = StationaryPolicy::Zero(S);

    for (long iter = 1; iter <= max_iter; ++iter) {
        for (int a = 0; a < A; ++a) q.col(a) = costs.col(a) + inner[a] * j;
        for (int s = 0; s < S; ++s) {
            const int a = argmin_row(q.row(s));
            policy(s) = a;
            j_next(s) = q(s, a);
        }
        const double delta = (j_next - j).cwiseAbs().maxCoeff();
        j = j_next;
        if (delta <= tol) return PlanResult{std::move(j), std::move(policy), iter};
        if (j.maxCoeff() > kDivergenceCap)
            throw DivergedError("ssp_optimal_values: values exceeded divergence cap");
    }
    throw DivergedError("ssp_optimal_values: max_iter reached with values still changing");
}

PolicyEvaluation policy_values(const SspMdp& mdp, const StationaryPolicy& pi,
                               double tol, long max_iter) {
    const int S = mdp.num_states;
    if (pi.size() != S) throw std::invalid_argument("policy_values: policy has wrong size");
    for (int s = 0; s < S; ++s)
        if (pi(s) < 0 || pi(s) >= mdp.num_actions)
            throw std::invalid_argument("policy_values: action out of range");

    Eigen::MatrixXd p_pi(S, S);
    Eigen::VectorXd c_pi(S);
    for (int s = 0; s < S; ++s) {
        p_pi.row(s) = mdp.transitions[pi(s)].row(s).head(S);
        c_pi(s) = mdp.mean_costs(s, pi(s));
    }

    auto iterate = [&](const Eigen::VectorXd& stage_cost, bool* converged) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(S);
        Eigen::VectorXd next(S);
        *converged = false;
        for (long iter = 1; iter <= max_iter; ++iter) {
            next = stage_cost + p_pi * v;
            const double delta = (next - v).cwiseAbs().maxCoeff();
            v = next;
            if (delta <= tol) {
                *converged = true;
                break;
            }
            if (v.maxCoeff() > kDivergenceCap) break;
        }
        return v;
    };

    PolicyEvaluation out;
    bool cost_converged = false;
    bool time_converged = false;
    out.cost_to_go = iterate(c_pi, &cost_converged);
    out.hitting_time = iterate(Eigen::VectorXd::Ones(S), &time_converged);
    out.proper = time_converged;
    return out;
}

InstanceParameters instance_parameters(const SspMdp& mdp, double tol) {
    InstanceParameters out;

    PlanResult opt = ssp_optimal_values(mdp, std::nullopt, tol);
    PolicyEvaluation eval = policy_values(mdp, opt.policy, tol);
    if (!eval.proper)
        throw DivergedError(
            "instance_parameters: tie-broken optimal policy has infinite hitting time; "
            "perturb zero costs to make the optimal policy proper");

    out.optimal_values = eval.cost_to_go;
    out.optimal_hitting_times = eval.hitting_time;
    out.optimal_policy = opt.policy;
    out.b_star = eval.cost_to_go.maxCoeff();
    out.t_star = eval.hitting_time.maxCoeff();
    out.j_opt_init = mdp.initial_dist.dot(eval.cost_to_go);

    PlanResult unit = ssp_optimal_values(
        mdp, Eigen::MatrixXd::Ones(mdp.num_states, mdp.num_actions), tol);
    out.diameter = unit.values.maxCoeff();
    return out;
}

} // namespace ssp
