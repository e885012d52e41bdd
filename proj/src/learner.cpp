#include "ssp/learner.hpp"

namespace ssp {

RandomPolicyLearner::RandomPolicyLearner(const FhLearnerInit& init, RngStream rng)
    : num_states_(init.num_states),
      num_actions_(init.num_actions),
      horizon_(init.horizon),
      rng_(std::move(rng)),
      policy_(init.horizon, init.num_states) {}

const Eigen::MatrixXi& RandomPolicyLearner::begin_episode(int initial_state) {
    if (initial_state < 0 || initial_state >= num_states_)
        throw std::out_of_range("RandomPolicyLearner: initial state out of range");
    for (int h = 0; h < horizon_; ++h)
        for (int s = 0; s < num_states_; ++s) policy_(h, s) = rng_.uniform_int(num_actions_);
    return policy_;
}

void RandomPolicyLearner::observe_step(int, int, double, int) {}

void RandomPolicyLearner::end_episode(const Trajectory& trajectory) {
    if (static_cast<int>(trajectory.actions.size()) != horizon_)
        throw LengthMismatchError("RandomPolicyLearner: trajectory length mismatch");
}

} // namespace ssp
