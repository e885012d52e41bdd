#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ssp/rng.hpp"

namespace ssp {

/// One finite-horizon episode record as the reduction hands it to the
/// learner. After the goal is first reached at step `goal_step` the
/// trajectory is padded: s_h = goal, a_h = 0, C_h = 0 for h > goal_step.
struct Trajectory {
    long interval_index = 0;       // m
    std::vector<int> states;       // H+1 entries
    std::vector<int> actions;      // H entries
    std::vector<double> costs;     // H entries
    std::optional<int> goal_step;  // number of real steps; empty if goal not reached
    bool padded = false;
};

class LengthMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Everything a finite-horizon regret minimizer is initialized with.
struct FhLearnerInit {
    int num_states = 0;  // includes the goal
    int num_actions = 0;
    int goal_state = 0;  // absorbing, zero step and terminal cost
    int horizon = 0;
    double delta = 0.0;
    Eigen::VectorXd terminal_costs;   // per state, zero at the goal
    double optimal_cost_bound = 0.0;  // upper bound on the optimal policy's expected cost
};

/// Episode-level interface the reduction drives. Per episode the caller
/// invokes begin_episode once, observe_step for every real (unpadded)
/// step, then end_episode with the padded trajectory.
class FiniteHorizonLearner {
public:
    virtual ~FiniteHorizonLearner() = default;

    /// Returns the policy for this episode as an H x num_states action table.
    virtual const Eigen::MatrixXi& begin_episode(int initial_state) = 0;

    virtual void observe_step(int state, int action, double cost, int next_state) = 0;

    virtual void end_episode(const Trajectory& trajectory) = 0;
};

using LearnerFactory =
    std::function<std::unique_ptr<FiniteHorizonLearner>(const FhLearnerInit&)>;

/// Baseline that draws a fresh uniformly random action table every
/// episode and learns nothing.
class RandomPolicyLearner final : public FiniteHorizonLearner {
public:
    RandomPolicyLearner(const FhLearnerInit& init, RngStream rng);

    const Eigen::MatrixXi& begin_episode(int initial_state) override;
    void observe_step(int state, int action, double cost, int next_state) override;
    void end_episode(const Trajectory& trajectory) override;

private:
    int num_states_;
    int num_actions_;
    int horizon_;
    RngStream rng_;
    Eigen::MatrixXi policy_;
};

} // namespace ssp
