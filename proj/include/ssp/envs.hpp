#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>

#include "ssp/mdp.hpp"

namespace ssp {

class SpecViolationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Hard one-step family: every action leads straight to the goal, each
/// state has a hidden special action with Bernoulli mean b_star while all
/// other actions cost b_star + epsilon. The special actions are drawn
/// from the instance seed, so a sweep over seeds realizes the
/// distribution over instances.
struct LowerBoundSpec {
    int num_states = 2;  // >= 2
    int num_actions = 2; // >= 2
    double b_star = 0.25;
    long num_episodes = 0;          // K, used for the default epsilon
    std::optional<double> epsilon;  // default (1/8) sqrt(b_star |A| |S| / K)

    double effective_epsilon() const;
};

SspMdp lower_bound_instance(const LowerBoundSpec& spec, std::uint64_t seed);

/// Seeded random instance. Every row gets a direct-to-goal probability
/// drawn from goal_prob_range (lower bound > 0, so every policy is
/// proper), the remaining mass spread over `connectivity` random interior
/// states, and a mean cost uniform in cost_range.
SspMdp random_ssp(int num_states, int num_actions,
                  std::pair<double, double> goal_prob_range,
                  std::pair<double, double> cost_range, int connectivity,
                  std::uint64_t seed);

/// Deterministic-cost chain with closed-form values: the single action
/// advances with probability p (state n-1 advances to the goal) and
/// self-loops otherwise. J*(s_i) = (n-i) * c / p for 0-based i.
SspMdp chain_ssp(int length, double forward_prob, double step_cost);

/// Generator registry for the experiment config file: "lower_bound",
/// "random", "chain". `params` may carry a "seed" overriding
/// `default_seed`.
SspMdp make_instance(const std::string& name, const nlohmann::json& params,
                     std::uint64_t default_seed);

} // namespace ssp
