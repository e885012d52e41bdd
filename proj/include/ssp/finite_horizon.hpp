#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

#include "ssp/mdp.hpp"

namespace ssp {

/// Finite-horizon MDP induced from an SSP instance. Unlike SspMdp the
/// goal is a real state here: index num_states-1, absorbing with zero
/// step cost and zero terminal cost.
struct FiniteHorizonMdp {
    int num_states = 0;  // includes the goal
    int num_actions = 0;
    int horizon = 0;

    std::vector<Eigen::MatrixXd> transitions; // per action: ns x ns, goal row = self-loop
    Eigen::MatrixXd mean_costs;               // ns x na, goal row zero
    Eigen::VectorXd terminal_costs;           // ns, goal entry zero

    int goal_index() const { return num_states - 1; }
};

/// Time-dependent deterministic policy: action per (step, state),
/// rows 0..H-1.
using FhPolicy = Eigen::MatrixXi;

class TooLargeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Extends an SSP instance with an absorbing goal and constant terminal
/// cost 8*b_star at every non-goal state.
FiniteHorizonMdp build_finite_horizon(const SspMdp& ssp, double b_star, int horizon);

struct FhPlan {
    Eigen::MatrixXd values; // (H+1) x ns; row h = step h+1 values, row H = terminal
    FhPolicy policy;        // H x ns, greedy with smallest-index ties
};

/// Backward induction for the optimal value table and greedy policy.
FhPlan fh_plan(const FiniteHorizonMdp& fh);

/// Optimal value table only.
Eigen::MatrixXd fh_optimal_values(const FiniteHorizonMdp& fh);

/// Backward induction without the min: value table of a fixed policy.
Eigen::MatrixXd fh_policy_values(const FiniteHorizonMdp& fh, const FhPolicy& policy);

/// Test oracle: exhaustive enumeration over time-dependent deterministic
/// policies with exact expectations by forward distribution propagation.
/// Returns the step-1 optimal values per start state. Throws
/// TooLargeError beyond 1e6 policies.
Eigen::VectorXd fh_brute_force_optimal(const FiniteHorizonMdp& fh);

/// Probability of not being at the goal after the full horizon when
/// starting from each state and following `policy` (exact forward pass).
Eigen::VectorXd fh_miss_probability(const FiniteHorizonMdp& fh, const FhPolicy& policy);

/// Embeds a stationary policy as a time-dependent one.
FhPolicy repeat_policy(const Eigen::VectorXi& stationary, int horizon, int num_states);

} // namespace ssp
