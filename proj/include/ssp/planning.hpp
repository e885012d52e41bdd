#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>

#include "ssp/mdp.hpp"

namespace ssp {

/// Deterministic stationary policy: action per interior state.
using StationaryPolicy = Eigen::VectorXi;

class DivergedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PlanResult {
    Eigen::VectorXd values;   // fixed point of the Bellman operator
    StationaryPolicy policy;  // greedy, ties broken toward the smallest action
    long iterations = 0;
};

/// Value iteration from the all-zero vector until the sup-norm change
/// drops to `tol`. With `cost_override` = all-ones the values are the
/// optimal expected hitting times. Throws DivergedError when max_iter is
/// reached with values still growing (no proper policy, or a zero-cost
/// cycle making the override problem ill-posed).
PlanResult ssp_optimal_values(const SspMdp& mdp,
                              const std::optional<Eigen::MatrixXd>& cost_override = std::nullopt,
                              double tol = 1e-10, long max_iter = 1000000);

struct PolicyEvaluation {
    Eigen::VectorXd cost_to_go;   // J^pi
    Eigen::VectorXd hitting_time; // T^pi; last iterate if the policy is improper
    bool proper = false;
};

/// Fixed-point evaluation of a policy's cost and unit-cost (hitting time)
/// Bellman equations. proper=false when the hitting-time iteration
/// exceeds the divergence cap (values above 1e9, or max_iter reached
/// while still growing).
PolicyEvaluation policy_values(const SspMdp& mdp, const StationaryPolicy& pi,
                               double tol = 1e-10, long max_iter = 1000000);

struct InstanceParameters {
    double b_star = 0.0;     // max_s J^{pi*}(s)
    double t_star = 0.0;     // max_s T^{pi*}(s)
    double diameter = 0.0;   // max_s min_pi T^pi(s)
    double j_opt_init = 0.0; // expected J^{pi*} under the initial distribution

    Eigen::VectorXd optimal_values;
    Eigen::VectorXd optimal_hitting_times;
    StationaryPolicy optimal_policy;
};

/// Plans the optimal policy on the true costs, evaluates it, and computes
/// the diameter from the unit-cost planning problem. Requires all mean
/// costs in [0,1], under which b_star <= diameter <= t_star. Throws
/// DivergedError if the tie-broken optimal policy has infinite hitting
/// time (perturb costs in that case).
InstanceParameters instance_parameters(const SspMdp& mdp, double tol = 1e-10);

} // namespace ssp
